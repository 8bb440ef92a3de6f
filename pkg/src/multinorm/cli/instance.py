"""
Instance files: one computation per TOML document (extension .mnt).

The top level holds `format_version` and `mode`, the blocks hold the
inputs of the mode. Unknown keys and blocks that the mode does not use are
rejected with the offending key named.

Author: Mounia Tonazzini
Date: October 2026
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any
import re
import tomllib

from multinorm.abelian import FiniteAbelianGroup, SubgroupGens
from multinorm.exceptions import InstanceParseError
from multinorm.hnp import FieldProfile, MultiFieldFacts, PrimeDegreeFacts
from multinorm.kummer import DEFAULT_BASE_LABEL, KummerFamily
from multinorm.lee import PROVIDERS, CalibratedProvider, InvariantProvider, OverrideProvider
from multinorm.localnorm import LocalPlaceData
from multinorm.ono import ClassNumberContext, IdealFormContext
from multinorm.units import FieldUnitData, FreePartData, UnitIndexInput

FORMAT_VERSION = 1

ALLOWED_MODES = ("sha", "hnp", "class-number", "local-index", "pell", "unit-index", "validate")

# mode -> (blocks allowed, groups of blocks of which one is required)
MODE_BLOCKS = {
    "sha": ({"family", "families", "provider"}, [("family", "families")]),
    "hnp": ({"profiles", "facts"}, [("profiles",)]),
    "class-number": (
        {"context", "ideal_form", "cm", "refined", "places", "family", "provider"},
        [("context", "ideal_form", "cm", "refined")],
    ),
    "local-index": ({"places"}, [("places",)]),
    "pell": ({"pell"}, [("pell",)]),
    "unit-index": ({"unit_index"}, [("unit_index",)]),
    "validate": (
        {"family", "families", "provider", "profiles", "facts", "places", "context",
         "ideal_form", "cm", "refined", "pell", "unit_index"},
        [],
    ),
}

FAMILY_KEYS = {"p", "n", "vectors", "prime_pair", "base_label", "independent_generators"}
PROVIDER_KEYS = {"name", "patching", "freedom", "fallback"}
FREEDOM_KEYS = {"r", "l", "class", "value"}
PROFILE_KEYS = {"degree", "galois", "cyclic", "abelian", "closure", "closure_label", "sha3_trivial"}
FACT_KEYS = {
    "pairwise_closure_disjoint", "intersection_sha_trivial", "intersection_sha_omega_trivial",
    "split_index", "split_meets", "prime", "compositum_degree_exceeds_p2",
    "some_local_degree_exceeds_p", "some_factor_cyclic",
}
PRIME_FACT_KEYS = {"compositum_degree_exceeds_p2", "some_local_degree_exceeds_p", "some_factor_cyclic"}
PLACE_KEYS = {
    "id", "kind", "in_s", "ramified", "group", "decomposition", "inertia",
    "inertia_subgroups", "real_local_degrees",
}
CONTEXT_KEYS = {
    "hS_L", "hS_k", "sha_order", "Lab_index", "unit_index", "adelic_unit_index",
    "hS_plus_L", "hS_plus_k", "q_phi", "unit_index_plus", "h0_L", "h0_k", "q_phi0",
    "Uk_index", "residue_norm_index", "constant_field_size", "residue_fields",
}
IDEAL_FORM_KEYS = {"I1_over_P1", "unit_meet_index", "adelic_meet_index"}
CM_KEYS = {"hK", "hKplus", "Q", "t"}
REFINED_KEYS = {"unit_index", "unit_index_plus", "q_phi", "q_phi0", "residue_norm_index", "lab_index"}
PELL_KEYS = {"d"}
UNIT_INDEX_KEYS = {"fields", "torsion_index", "degrees", "free_rank", "norm_images", "free_quotient"}
UNIT_FIELD_KEYS = {"degree", "norm_sign"}


@dataclass(frozen=True)
class InstanceFile:
    """
    A parsed instance. Two instances are equal when their source mappings are.

    Attributes:
        - format_version (int): Version of the instance format.
        - mode (str): One of ALLOWED_MODES.
        - data (dict): The source mapping, echoed in reports.
        - the other attributes hold the validated blocks (empty or None when absent).
    """

    format_version: int
    mode: str
    data: dict = field(default_factory=dict)
    families: tuple[KummerFamily, ...] = field(default=(), compare=False)
    provider: InvariantProvider | None = field(default=None, compare=False)
    profiles: tuple[FieldProfile, ...] = field(default=(), compare=False)
    facts: MultiFieldFacts | None = field(default=None, compare=False)
    places: tuple[LocalPlaceData, ...] = field(default=(), compare=False)
    context: ClassNumberContext | None = field(default=None, compare=False)
    ideal_form: IdealFormContext | None = field(default=None, compare=False)
    cm: dict | None = field(default=None, compare=False)
    refined: dict | None = field(default=None, compare=False)
    pell_d: int | None = field(default=None, compare=False)
    unit_index: dict | None = field(default=None, compare=False)


def _table(value: Any, key: str) -> dict:
    if not isinstance(value, dict):
        raise InstanceParseError("Expected a table", key=key)
    return value


def _array_of_tables(value: Any, key: str) -> list[dict]:
    if not isinstance(value, list) or not all(isinstance(item, dict) for item in value):
        raise InstanceParseError("Expected an array of tables", key=key)
    return value


def _check_keys(block: dict, allowed: set[str], block_name: str, required: tuple[str, ...] = ()) -> None:
    for key in block:
        if key not in allowed:
            raise InstanceParseError(f"Unknown key in [{block_name}]", key=f"{block_name}.{key}")
    for key in required:
        if key not in block:
            raise InstanceParseError(f"Missing key in [{block_name}]", key=f"{block_name}.{key}")


def _bool(value: Any, key: str) -> bool:
    if not isinstance(value, bool):
        raise InstanceParseError("Expected true or false", key=key)
    return value


def _int(value: Any, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceParseError("Expected an integer", key=key)
    return value


def _int_list(value: Any, key: str) -> tuple[int, ...]:
    if not isinstance(value, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in value):
        raise InstanceParseError("Expected a list of integers", key=key)
    return tuple(value)


def _int_lists(value: Any, key: str) -> tuple[tuple[int, ...], ...]:
    if not isinstance(value, list):
        raise InstanceParseError("Expected a list of integer lists", key=key)
    return tuple(_int_list(item, key) for item in value)


def _family(block: dict, name: str) -> KummerFamily:
    _check_keys(block, FAMILY_KEYS, name, required=("p", "n", "vectors"))
    vectors = block["vectors"]
    if not isinstance(vectors, list) or not all(isinstance(v, list) for v in vectors):
        raise InstanceParseError("Expected a list of pairs [a, b]", key=f"{name}.vectors")
    prime_pair = block.get("prime_pair")
    if prime_pair is not None and not isinstance(prime_pair, list):
        raise InstanceParseError("Expected a pair of primes", key=f"{name}.prime_pair")
    return KummerFamily(
        p=block["p"],
        n=block["n"],
        vectors=tuple(tuple(v) for v in vectors),
        prime_pair=tuple(prime_pair) if prime_pair is not None else None,
        base_label=block.get("base_label", DEFAULT_BASE_LABEL),
        independent_generators=_bool(block.get("independent_generators", True), f"{name}.independent_generators"),
    )


def _provider(block: dict) -> InvariantProvider:
    _check_keys(block, PROVIDER_KEYS, "provider")
    name = block.get("name", "calibrated")
    if name not in PROVIDERS:
        raise InstanceParseError(f"Unknown provider '{name}'. Available: {', '.join(PROVIDERS)}", key="provider.name")

    if name == "calibrated":
        for key in ("patching", "freedom", "fallback"):
            if key in block:
                raise InstanceParseError("Only the override provider takes explicit values", key=f"provider.{key}")
        return CalibratedProvider()

    patching = {}
    for r, value in _table(block.get("patching", {}), "provider.patching").items():
        if not r.isdigit():
            raise InstanceParseError("Patching keys are the indices r", key=f"provider.patching.{r}")
        patching[int(r)] = value

    freedom = {}
    for entry in _array_of_tables(block.get("freedom", []), "provider.freedom"):
        _check_keys(entry, FREEDOM_KEYS, "provider.freedom", required=tuple(sorted(FREEDOM_KEYS)))
        location = tuple(_int(entry[k], f"provider.freedom.{k}") for k in ("r", "l", "class"))
        freedom[location] = entry["value"]

    fallback = block.get("fallback")
    if fallback is not None and fallback != "calibrated":
        raise InstanceParseError("The fallback provider can only be 'calibrated'", key="provider.fallback")
    return OverrideProvider(patching, freedom, CalibratedProvider() if fallback else None)


def _profile(block: dict) -> FieldProfile:
    _check_keys(block, PROFILE_KEYS, "profiles", required=("degree",))
    sha3 = block.get("sha3_trivial")
    return FieldProfile(
        degree=block["degree"],
        is_galois=_bool(block.get("galois", False), "profiles.galois"),
        is_cyclic=_bool(block.get("cyclic", False), "profiles.cyclic"),
        is_abelian=_bool(block.get("abelian", False), "profiles.abelian"),
        closure_group=block.get("closure", "other"),
        closure_label=block.get("closure_label"),
        sha3_trivial=None if sha3 is None else _bool(sha3, "profiles.sha3_trivial"),
    )


def _facts(block: dict) -> MultiFieldFacts:
    _check_keys(block, FACT_KEYS, "facts")

    def optional_bool(key):
        return None if key not in block else _bool(block[key], f"facts.{key}")

    prime_facts = None
    if "prime" in block:
        prime_facts = PrimeDegreeFacts(
            p=block["prime"],
            **{key: _bool(block[key], f"facts.{key}") for key in PRIME_FACT_KEYS if key in block},
        )
    else:
        for key in PRIME_FACT_KEYS:
            if key in block:
                raise InstanceParseError("Degree-p facts need 'prime'", key=f"facts.{key}")

    return MultiFieldFacts(
        pairwise_closure_disjoint=optional_bool("pairwise_closure_disjoint"),
        intersection_sha_trivial=optional_bool("intersection_sha_trivial"),
        intersection_sha_omega_trivial=optional_bool("intersection_sha_omega_trivial"),
        split_index=block.get("split_index"),
        split_meets=block.get("split_meets"),
        prime_facts=prime_facts,
    )


def _place(block: dict) -> LocalPlaceData:
    _check_keys(block, PLACE_KEYS, "places", required=("id",))
    place_id = str(block["id"])

    full_group = FiniteAbelianGroup(_int_list(block["group"], "places.group")) if "group" in block else None
    inertia = FiniteAbelianGroup(_int_list(block["inertia"], "places.inertia")) if "inertia" in block else None

    def subgroups(key, ambient):
        listed = block.get(key, [])
        if not isinstance(listed, list):
            raise InstanceParseError("Expected one list of generators per w | v", key=f"places.{key}")
        if listed and ambient is None:
            raise InstanceParseError("Subgroups need their ambient group", key=f"places.{key}")
        return tuple(SubgroupGens(ambient, _int_lists(gens, f"places.{key}")) for gens in listed)

    return LocalPlaceData(
        place_id=place_id,
        kind=block.get("kind", "finite"),
        full_group=full_group,
        decomposition_subgroups=subgroups("decomposition", full_group),
        inertia_group=inertia,
        inertia_subgroups=subgroups("inertia_subgroups", inertia),
        real_local_degrees=_int_list(block.get("real_local_degrees", []), "places.real_local_degrees"),
        in_s=_bool(block.get("in_s", False), "places.in_s"),
        ramified=_bool(block.get("ramified", False), "places.ramified"),
    )


def _unit_index(block: dict) -> dict:
    _check_keys(block, UNIT_INDEX_KEYS, "unit_index")
    if "fields" in block:
        for key in block:
            if key != "fields":
                raise InstanceParseError("'fields' (over Q) excludes the general keys", key=f"unit_index.{key}")
        fields_data = []
        for entry in _array_of_tables(block["fields"], "unit_index.fields"):
            _check_keys(entry, UNIT_FIELD_KEYS, "unit_index.fields", required=("degree",))
            fields_data.append(FieldUnitData(entry["degree"], entry.get("norm_sign")))
        return {"fields": tuple(fields_data)}

    _check_keys(block, UNIT_INDEX_KEYS, "unit_index", required=("torsion_index", "degrees"))
    free_part = None
    if "free_rank" in block:
        norm_images = _int_lists(block.get("norm_images", []), "unit_index.norm_images")
        free_part = FreePartData(block["free_rank"], norm_images)
    elif "norm_images" in block:
        raise InstanceParseError("norm_images need free_rank", key="unit_index.norm_images")
    free_quotient = None
    if "free_quotient" in block:
        orders = _int_list(block["free_quotient"], "unit_index.free_quotient")
        free_quotient = FiniteAbelianGroup.from_cyclic_orders(orders)
    return {
        "input": UnitIndexInput(block["torsion_index"], _int_list(block["degrees"], "unit_index.degrees"), free_part),
        "free_quotient": free_quotient,
    }


def instance_from_mapping(data: dict) -> InstanceFile:
    """
    Builds and validates an instance from a parsed mapping.

    Raises:
        - InstanceParseError: on unknown or misplaced keys and blocks.
        - ValidationError (and subclasses): on invalid values.
    """

    for key in ("format_version", "mode"):
        if key not in data:
            raise InstanceParseError("Missing top-level key", key=key)
    if data["format_version"] != FORMAT_VERSION:
        raise InstanceParseError(
            f"Unsupported format_version {data['format_version']!r} (expected {FORMAT_VERSION})",
            key="format_version",
        )
    mode = data["mode"]
    if mode not in ALLOWED_MODES:
        raise InstanceParseError(f"Unknown mode {mode!r}. Allowed: {', '.join(ALLOWED_MODES)}", key="mode")

    allowed, required_groups = MODE_BLOCKS[mode]
    blocks = {key: value for key, value in data.items() if key not in ("format_version", "mode")}
    for key in blocks:
        if key not in MODE_BLOCKS["validate"][0]:
            raise InstanceParseError("Unknown block", key=key)
        if key not in allowed:
            raise InstanceParseError(f"Block not used by mode '{mode}'", key=key)
    for group in required_groups:
        if not any(key in blocks for key in group):
            raise InstanceParseError(f"Mode '{mode}' needs one of: {', '.join(group)}", key=group[0])
    if "family" in blocks and "families" in blocks:
        raise InstanceParseError("Use either [family] or [[families]]", key="families")

    families = ()
    if "family" in blocks:
        families = (_family(_table(blocks["family"], "family"), "family"),)
    elif "families" in blocks:
        families = tuple(_family(b, "families") for b in _array_of_tables(blocks["families"], "families"))

    provider = _provider(_table(blocks["provider"], "provider")) if "provider" in blocks else None
    profiles = tuple(_profile(b) for b in _array_of_tables(blocks.get("profiles", []), "profiles"))
    facts = _facts(_table(blocks["facts"], "facts")) if "facts" in blocks else None
    places = tuple(_place(b) for b in _array_of_tables(blocks.get("places", []), "places"))

    context = None
    if "context" in blocks:
        block = _table(blocks["context"], "context")
        _check_keys(block, CONTEXT_KEYS, "context", required=("hS_L", "hS_k"))
        if "residue_fields" in block:
            pairs = _int_lists(block["residue_fields"], "context.residue_fields")
            if any(len(pair) != 2 for pair in pairs):
                raise InstanceParseError("Expected pairs [q_i, degree]", key="context.residue_fields")
            block = {**block, "residue_fields": pairs}
        context = ClassNumberContext(**block)

    ideal_form = None
    if "ideal_form" in blocks:
        block = _table(blocks["ideal_form"], "ideal_form")
        _check_keys(block, IDEAL_FORM_KEYS, "ideal_form", required=tuple(sorted(IDEAL_FORM_KEYS)))
        ideal_form = IdealFormContext(**block)

    cm = None
    if "cm" in blocks:
        cm = dict(_table(blocks["cm"], "cm"))
        _check_keys(cm, CM_KEYS, "cm", required=tuple(sorted(CM_KEYS)))

    refined = None
    if "refined" in blocks:
        refined = dict(_table(blocks["refined"], "refined"))
        _check_keys(refined, REFINED_KEYS, "refined")

    pell_d = None
    if "pell" in blocks:
        block = _table(blocks["pell"], "pell")
        _check_keys(block, PELL_KEYS, "pell", required=("d",))
        pell_d = block["d"]

    unit_index = _unit_index(_table(blocks["unit_index"], "unit_index")) if "unit_index" in blocks else None

    return InstanceFile(
        format_version=data["format_version"],
        mode=mode,
        data=data,
        families=families,
        provider=provider,
        profiles=profiles,
        facts=facts,
        places=places,
        context=context,
        ideal_form=ideal_form,
        cm=cm,
        refined=refined,
        pell_d=pell_d,
        unit_index=unit_index,
    )


_LOCATION = re.compile(r"at line (\d+), column (\d+)")


def parse_instance(text: str) -> InstanceFile:
    """
    Parses the text of an instance file.

    Raises:
        - InstanceParseError: on a syntax error (with line and column) or a misplaced key.
        - ValidationError (and subclasses): on invalid values.
    """

    if not text.strip():
        raise InstanceParseError("Empty instance file", line=1, column=1)
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        match = _LOCATION.search(str(e))
        message = _LOCATION.sub("", str(e)).strip(" ()")
        if match:
            raise InstanceParseError(message, line=int(match.group(1)), column=int(match.group(2))) from e
        raise InstanceParseError(message) from e
    return instance_from_mapping(data)


def load_instance(path: str | Path) -> InstanceFile:
    """Reads and parses an instance file."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Instance file {path} was not found.")
    return parse_instance(path.read_text(encoding="utf-8"))
