"""
Unit tests for instance files (.mnt).

Author: Mounia Tonazzini
Date: October 2026
"""

import json

import pytest

from multinorm.cli.instance import ALLOWED_MODES, instance_from_mapping, load_instance, parse_instance
from multinorm.exceptions import InstanceParseError, ValidationError
from multinorm.lee import CalibratedProvider, OverrideProvider

SHA_TEXT = """
format_version = 1
mode = "sha"

[family]
p = 3
n = 3
vectors = [[1, 0], [1, 1], [2, 3], [3, 5], [5, 11]]
"""


# Test 1: Shipped fixtures parse
@pytest.mark.parametrize(
    "name, mode",
    [
        ("example1.mnt", "sha"),
        ("example2.mnt", "sha"),
        ("pell_3.mnt", "pell"),
        ("hnp_symmetric.mnt", "hnp"),
        ("hnp_disjoint_pair.mnt", "hnp"),
        ("local_two_quadratics.mnt", "local-index"),
        ("class_number_qi.mnt", "class-number"),
        ("unit_index_sqrt3.mnt", "unit-index"),
    ],
)
def test_fixtures_parse(fixtures_dir, name, mode):
    instance = load_instance(fixtures_dir / name)
    assert instance.mode == mode
    assert instance.mode in ALLOWED_MODES


def test_sha_instance_content():
    instance = parse_instance(SHA_TEXT)
    assert len(instance.families) == 1
    assert instance.families[0].vectors[2] == (2, 3)
    assert instance.provider is None


def test_local_instance_content(fixtures_dir):
    place = load_instance(fixtures_dir / "local_two_quadratics.mnt").places[0]
    assert place.full_group.invariant_factors == (2, 2)
    assert len(place.decomposition_subgroups) == 2
    assert place.ramified and not place.in_s


def test_missing_file():
    with pytest.raises(FileNotFoundError):
        load_instance("does_not_exist.mnt")


# Test 2: Syntax errors carry their location
def test_empty_instance():
    with pytest.raises(InstanceParseError) as excinfo:
        parse_instance("  \n")
    assert (excinfo.value.line, excinfo.value.column) == (1, 1)


def test_syntax_error_location():
    with pytest.raises(InstanceParseError) as excinfo:
        parse_instance('format_version = 1\nmode = \n')
    assert excinfo.value.line == 2
    assert excinfo.value.column is not None
    assert "line 2" in str(excinfo.value)


# Test 3: Top-level checks
@pytest.mark.parametrize(
    "mapping, key",
    [
        ({"mode": "sha"}, "format_version"),
        ({"format_version": 2, "mode": "sha"}, "format_version"),
        ({"format_version": 1, "mode": "solve"}, "mode"),
        ({"format_version": 1, "mode": "pell", "pell": {"d": 3}, "colour": {}}, "colour"),
        ({"format_version": 1, "mode": "pell", "pell": {"d": 3}, "family": {}}, "family"),
        ({"format_version": 1, "mode": "sha"}, "family"),
        ({"format_version": 1, "mode": "pell", "pell": {"d": 3, "x": 1}}, "pell.x"),
    ],
)
def test_top_level_errors(mapping, key):
    with pytest.raises(InstanceParseError) as excinfo:
        instance_from_mapping(mapping)
    assert excinfo.value.key == key


def test_family_and_families_are_exclusive():
    family = {"p": 3, "n": 1, "vectors": [[1, 0]]}
    with pytest.raises(InstanceParseError):
        instance_from_mapping({"format_version": 1, "mode": "sha", "family": family, "families": [family]})


def test_several_families():
    families = [{"p": 2, "n": 1, "vectors": [[1, 0], [0, 1]]}, {"p": 3, "n": 1, "vectors": [[1, 0], [0, 1]]}]
    instance = instance_from_mapping({"format_version": 1, "mode": "sha", "families": families})
    assert [f.p for f in instance.families] == [2, 3]


# Test 4: Blocks
def test_unknown_family_key():
    with pytest.raises(InstanceParseError) as excinfo:
        parse_instance(SHA_TEXT + "colour = 'red'\n")
    assert excinfo.value.key == "family.colour"


def test_family_values_are_validated():
    with pytest.raises(ValidationError):
        parse_instance(SHA_TEXT.replace("[5, 11]", "[5, 27]"))


def test_vectors_must_be_pairs():
    with pytest.raises(InstanceParseError):
        parse_instance(SHA_TEXT.replace("vectors = [[1, 0], [1, 1], [2, 3], [3, 5], [5, 11]]", "vectors = [1, 0]"))


def test_calibrated_provider():
    instance = parse_instance(SHA_TEXT + '\n[provider]\nname = "calibrated"\n')
    assert isinstance(instance.provider, CalibratedProvider)


def test_override_provider():
    text = SHA_TEXT + """
[provider]
name = "override"
fallback = "calibrated"

[provider.patching]
1 = 3

[[provider.freedom]]
r = 0
l = 0
class = 1
value = 0
"""
    provider = parse_instance(text).provider
    assert isinstance(provider, OverrideProvider)
    assert provider.patching == {1: 3}
    assert provider.freedom == {(0, 0, 1): 0}
    assert isinstance(provider.fallback, CalibratedProvider)


@pytest.mark.parametrize(
    "provider, key",
    [
        ({"name": "magic"}, "provider.name"),
        ({"name": "calibrated", "patching": {"1": 2}}, "provider.patching"),
        ({"name": "override", "fallback": "override"}, "provider.fallback"),
        ({"name": "override", "patching": {"r1": 2}}, "provider.patching.r1"),
        ({"name": "override", "freedom": [{"r": 0, "l": 0}]}, "provider.freedom.class"),
    ],
)
def test_provider_errors(provider, key):
    family = {"p": 3, "n": 1, "vectors": [[1, 0]]}
    with pytest.raises(InstanceParseError) as excinfo:
        instance_from_mapping({"format_version": 1, "mode": "sha", "family": family, "provider": provider})
    assert excinfo.value.key == key


def test_profiles_and_facts():
    mapping = {
        "format_version": 1,
        "mode": "hnp",
        "profiles": [{"degree": 3, "closure": "symmetric"}] * 3,
        "facts": {"prime": 3, "some_factor_cyclic": True, "some_local_degree_exceeds_p": True},
    }
    instance = instance_from_mapping(mapping)
    assert len(instance.profiles) == 3
    assert instance.facts.prime_facts.p == 3


def test_profile_flags_must_be_booleans():
    mapping = {"format_version": 1, "mode": "hnp", "profiles": [{"degree": 4, "galois": "yes"}]}
    with pytest.raises(InstanceParseError) as excinfo:
        instance_from_mapping(mapping)
    assert excinfo.value.key == "profiles.galois"


def test_prime_facts_need_prime():
    mapping = {"format_version": 1, "mode": "hnp", "profiles": [{"degree": 3}], "facts": {"some_factor_cyclic": True}}
    with pytest.raises(InstanceParseError):
        instance_from_mapping(mapping)


def test_subgroups_need_their_group():
    mapping = {"format_version": 1, "mode": "local-index", "places": [{"id": "v", "decomposition": [[[1]]]}]}
    with pytest.raises(InstanceParseError):
        instance_from_mapping(mapping)


@pytest.mark.parametrize(
    "block, key",
    [
        ({"id": "v", "group": 2}, "places.group"),
        ({"id": "v", "group": [2], "decomposition": [1]}, "places.decomposition"),
        ({"id": "v", "group": [2], "decomposition": [[1]]}, "places.decomposition"),
        ({"id": "v", "group": [2], "decomposition": 1}, "places.decomposition"),
        ({"id": "v", "inertia": "Z/2"}, "places.inertia"),
        ({"id": "v", "inertia": [2], "inertia_subgroups": [[[True]]]}, "places.inertia_subgroups"),
        ({"id": "r", "kind": "real", "real_local_degrees": 2}, "places.real_local_degrees"),
    ],
)
def test_place_values_of_the_wrong_type(block, key):
    with pytest.raises(InstanceParseError) as excinfo:
        instance_from_mapping({"format_version": 1, "mode": "local-index", "places": [block]})
    assert excinfo.value.key == key


@pytest.mark.parametrize(
    "block, key",
    [
        ({"torsion_index": 1, "degrees": 3}, "unit_index.degrees"),
        ({"torsion_index": 1, "degrees": [2, "4"]}, "unit_index.degrees"),
        ({"torsion_index": 1, "degrees": [2], "free_rank": 1, "norm_images": [1]}, "unit_index.norm_images"),
        ({"torsion_index": 1, "degrees": [2], "free_quotient": 2}, "unit_index.free_quotient"),
    ],
)
def test_unit_index_values_of_the_wrong_type(block, key):
    with pytest.raises(InstanceParseError) as excinfo:
        instance_from_mapping({"format_version": 1, "mode": "unit-index", "unit_index": block})
    assert excinfo.value.key == key


@pytest.mark.parametrize("residue_fields", [3, [3], [[4, 16, 4]], [["16", 4]]])
def test_residue_fields_must_be_pairs(residue_fields):
    context = {"hS_L": 1, "hS_k": 1, "constant_field_size": 4, "residue_fields": residue_fields}
    with pytest.raises(InstanceParseError) as excinfo:
        instance_from_mapping({"format_version": 1, "mode": "class-number", "context": context})
    assert excinfo.value.key == "context.residue_fields"


def test_freedom_location_must_be_integers():
    family = {"p": 3, "n": 1, "vectors": [[1, 0]]}
    provider = {"name": "override", "freedom": [{"r": [0], "l": 0, "class": 1, "value": 1}]}
    with pytest.raises(InstanceParseError) as excinfo:
        instance_from_mapping({"format_version": 1, "mode": "sha", "family": family, "provider": provider})
    assert excinfo.value.key == "provider.freedom.r"


def test_unit_index_blocks():
    over_q = instance_from_mapping({
        "format_version": 1, "mode": "unit-index",
        "unit_index": {"fields": [{"degree": 2, "norm_sign": -1}]},
    })
    assert over_q.unit_index["fields"][0].norm_sign == -1

    general = instance_from_mapping({
        "format_version": 1, "mode": "unit-index",
        "unit_index": {"torsion_index": 2, "degrees": [2, 4], "free_rank": 2, "norm_images": [[1, 0]]},
    })
    assert general.unit_index["input"].free_part_data.rank == 2
    assert general.unit_index["free_quotient"] is None

    with pytest.raises(InstanceParseError):
        instance_from_mapping({
            "format_version": 1, "mode": "unit-index",
            "unit_index": {"fields": [{"degree": 2}], "torsion_index": 1},
        })


def test_context_block(fixtures_dir):
    ctx = load_instance(fixtures_dir / "class_number_qi.mnt").context
    assert (ctx.Lab_index, ctx.adelic_unit_index) == (2, 2)


# Test 5: Instances compare by their source mapping
def test_instance_equality_and_json_round_trip():
    first = parse_instance(SHA_TEXT)
    second = parse_instance(SHA_TEXT)
    assert first == second
    assert instance_from_mapping(json.loads(json.dumps(first.data))) == first


def test_validate_mode_accepts_any_block():
    mapping = {"format_version": 1, "mode": "validate", "pell": {"d": 5}, "profiles": [{"degree": 5}]}
    assert instance_from_mapping(mapping).mode == "validate"
