"""
Rule engine for the Hasse norm principle of L = K_1 x ... x K_r.

The engine does not compute Galois closures: it consumes asserted facts
(field profiles, intersection facts) and looks for the first catalogue rule
whose conditions are met. The only negative answer is "inconclusive", since
every rule is a sufficient condition.

Author: Mounia Tonazzini
Date: October 2026
"""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence
import logging

from sympy import isprime

from multinorm.exceptions import InconsistentProfileError, ValidationError
from multinorm.rule_catalogue import RULE_ORDER, RuleCatalogue
from multinorm.utils import validate_positive_int

logger = logging.getLogger(__name__)


class ClosureGroup(str, Enum):
    """Isomorphism type of Gal(K^c/k), acting on the [K:k] embeddings of K."""

    CYCLIC = "cyclic"
    DIHEDRAL = "dihedral"
    SYMMETRIC = "symmetric"
    ALTERNATING = "alternating"
    OTHER = "other"


class Outcome(str, Enum):
    HOLDS = "holds"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class FieldProfile:
    """
    Structural facts about one field K over k.

    Attributes:
        - degree (int): [K:k], at least 2.
        - is_galois, is_cyclic, is_abelian (bool): Properties of K/k.
        - closure_group (ClosureGroup): Type of Gal(K^c/k) as a group of degree [K:k].
        - closure_label (str | None): Free description for closure_group OTHER.
        - sha3_trivial (bool | None): Asserted triviality of Sha^3(Gal(K/k), Z).
    """

    degree: int
    is_galois: bool = False
    is_cyclic: bool = False
    is_abelian: bool = False
    closure_group: ClosureGroup = ClosureGroup.OTHER
    closure_label: str | None = None
    sha3_trivial: bool | None = None

    def __post_init__(self):
        validate_positive_int(self.degree, "degree", minimum=2)
        try:
            object.__setattr__(self, "closure_group", ClosureGroup(self.closure_group))
        except ValueError as e:
            allowed = ", ".join(c.value for c in ClosureGroup)
            raise InconsistentProfileError(
                f"Unknown closure group '{self.closure_group}'. Allowed: {allowed}"
            ) from e

        if self.is_cyclic and not self.is_abelian:
            raise InconsistentProfileError("A cyclic extension is abelian: set is_abelian")
        if self.is_abelian and not self.is_galois:
            raise InconsistentProfileError("An abelian extension is Galois: set is_galois")
        if (self.closure_group is ClosureGroup.CYCLIC) != self.is_cyclic:
            raise InconsistentProfileError("closure_group 'cyclic' goes with is_cyclic and only with it")

        # D_n, S_n (n >= 3) and A_n (n >= 4) are larger than n: K cannot be Galois.
        minimum = {ClosureGroup.DIHEDRAL: 3, ClosureGroup.SYMMETRIC: 3, ClosureGroup.ALTERNATING: 4}
        if self.closure_group in minimum:
            if self.degree < minimum[self.closure_group]:
                raise InconsistentProfileError(
                    f"A {self.closure_group.value} closure needs degree >= {minimum[self.closure_group]} "
                    f"(provided: {self.degree})"
                )
            if self.is_galois:
                raise InconsistentProfileError(
                    f"A Galois field of degree {self.degree} cannot have a {self.closure_group.value} closure"
                )


@dataclass(frozen=True)
class PrimeDegreeFacts:
    """Facts for a family of distinct degree-p fields."""

    p: int
    compositum_degree_exceeds_p2: bool = False
    some_local_degree_exceeds_p: bool = False
    some_factor_cyclic: bool = False

    def __post_init__(self):
        validate_positive_int(self.p, "prime", minimum=2)


@dataclass(frozen=True)
class MultiFieldFacts:
    """
    Asserted facts about several fields. None means unknown.

    Attributes:
        - pairwise_closure_disjoint (bool | None): K_1^c meets K_2^c in k.
        - intersection_sha_trivial (bool | None): Sha(F/k) = 0 for F the intersection of the fields.
        - intersection_sha_omega_trivial (bool | None): Sha_omega(F/k) = 0.
        - split_index (int | None): Witness i with 1 <= i <= r - 1.
        - split_meets (str | None): "F" or "k", the intersection of K_1...K_i with K_{i+1}...K_r.
        - prime_facts (PrimeDegreeFacts | None): Facts for a degree-p family.
    """

    pairwise_closure_disjoint: bool | None = None
    intersection_sha_trivial: bool | None = None
    intersection_sha_omega_trivial: bool | None = None
    split_index: int | None = None
    split_meets: str | None = None
    prime_facts: PrimeDegreeFacts | None = None

    def __post_init__(self):
        if self.split_meets is not None and self.split_meets not in ("F", "k"):
            raise ValidationError(f"split_meets must be 'F' or 'k' (provided: {self.split_meets!r})")
        if (self.split_index is None) != (self.split_meets is None):
            raise ValidationError("split_index and split_meets go together")
        if self.split_index is not None:
            validate_positive_int(self.split_index, "split_index")


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    rule_id: str | None = None
    explanation: str = ""

    def __post_init__(self):
        if self.outcome is Outcome.HOLDS and self.rule_id not in RULE_ORDER:
            raise ValidationError(f"A 'holds' verdict needs a rule id, got {self.rule_id!r}")

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS


NO_FACTS = MultiFieldFacts()

# Each rule returns an explanation when it applies, None otherwise.
Rule = Callable[[Sequence[FieldProfile], MultiFieldFacts], str | None]


def _rule_1a(profiles, facts):
    if len(profiles) != 1 or not profiles[0].is_galois:
        return None
    if profiles[0].is_cyclic:
        return "K/k is cyclic, so Sha^3(G, Z) = 0"
    if profiles[0].sha3_trivial:
        return "K/k is Galois with Sha^3(G, Z) = 0"
    return None


def _rule_1b(profiles, facts):
    if len(profiles) == 1 and isprime(profiles[0].degree):
        return f"[K:k] = {profiles[0].degree} is a prime"
    return None


def _closure_rule(kind: ClosureGroup, name: str, min_degree: int = 2) -> Rule:
    def rule(profiles, facts):
        if len(profiles) != 1:
            return None
        profile = profiles[0]
        if profile.closure_group is kind and profile.degree >= min_degree:
            return f"[K:k] = {profile.degree} and Gal(K^c/k) = {name}_{profile.degree}"
        return None

    return rule


def _rule_2a(profiles, facts):
    if len(profiles) != 2:
        return None
    for i, profile in enumerate(profiles, start=1):
        if profile.is_cyclic:
            return f"K_{i} is cyclic over k"
    return None


def _rule_2b(profiles, facts):
    if len(profiles) == 2 and facts.pairwise_closure_disjoint:
        return "K_1^c and K_2^c intersect in k"
    return None


def _rule_2c(profiles, facts):
    if len(profiles) == 2 and all(p.is_abelian for p in profiles) and facts.intersection_sha_trivial:
        return "K_1, K_2 are abelian and Sha(F/k) = 0"
    return None


def _rule_2d(profiles, facts):
    if len(profiles) == 2 and facts.intersection_sha_omega_trivial:
        return "Sha_omega(F/k) = 0"
    return None


def _valid_split(profiles, facts, meets: str) -> bool:
    r = len(profiles)
    return (
        r >= 2
        and all(p.is_galois for p in profiles)
        and facts.split_meets == meets
        and facts.split_index is not None
        and 1 <= facts.split_index <= r - 1
    )


def _rule_3a(profiles, facts):
    if _valid_split(profiles, facts, "F") and facts.intersection_sha_omega_trivial:
        i = facts.split_index
        return f"all K_i are Galois, K_1..K_{i} meets K_{i + 1}..K_{len(profiles)} in F and Sha_omega(F/k) = 0"
    return None


def _rule_3b(profiles, facts):
    if _valid_split(profiles, facts, "k"):
        i = facts.split_index
        return f"all K_i are Galois and K_1..K_{i} meets K_{i + 1}..K_{len(profiles)} in k"
    return None


def _rule_3c(profiles, facts):
    prime = facts.prime_facts
    if prime is None or len(profiles) < 2 or not isprime(prime.p):
        return None
    if any(profile.degree != prime.p for profile in profiles):
        return None
    if not (prime.some_factor_cyclic or any(profile.is_cyclic for profile in profiles)):
        return None
    if prime.compositum_degree_exceeds_p2:
        return f"degree-{prime.p} fields, one cyclic, compositum of degree > {prime.p ** 2}"
    if prime.some_local_degree_exceeds_p:
        return f"degree-{prime.p} fields, one cyclic, a local degree of the compositum > {prime.p}"
    return None


RULES: dict[str, Rule] = {
    "1a": _rule_1a,
    "1b": _rule_1b,
    "1c": _closure_rule(ClosureGroup.DIHEDRAL, "D"),
    "1d": _closure_rule(ClosureGroup.SYMMETRIC, "S"),
    "1e": _closure_rule(ClosureGroup.ALTERNATING, "A", min_degree=5),
    "2a": _rule_2a,
    "2b": _rule_2b,
    "2c": _rule_2c,
    "2d": _rule_2d,
    "3a": _rule_3a,
    "3b": _rule_3b,
    "3c": _rule_3c,
}


def _check_inputs(profiles: Sequence[FieldProfile], facts: MultiFieldFacts) -> None:
    if not profiles:
        raise ValidationError("At least one field profile is needed")
    for profile in profiles:
        if not isinstance(profile, FieldProfile):
            raise InconsistentProfileError(f"Expected a FieldProfile, got {type(profile).__name__}")
    r = len(profiles)
    if facts.split_index is not None and not 1 <= facts.split_index <= r - 1:
        logger.warning(f"split_index {facts.split_index} is outside [1, {r - 1}], rules 3a and 3b are skipped")


def decide_hnp(profiles: Sequence[FieldProfile], facts: MultiFieldFacts = NO_FACTS) -> Verdict:
    """
    Decides whether the catalogue proves the Hasse norm principle.

    Rules are tried in catalogue order, first match wins.

    Args:
        - profiles (list[FieldProfile]): One profile per field K_i.
        - facts (MultiFieldFacts): Facts about the family, all optional.

    Returns:
        Verdict: HOLDS with the rule id, or INCONCLUSIVE.

    Raises:
        - InconsistentProfileError: if a profile is not a FieldProfile.
        - ValidationError: if no profile is given.
    """

    _check_inputs(profiles, facts)
    for rule_id in RULE_ORDER:
        explanation = RULES[rule_id](profiles, facts)
        if explanation is not None:
            logger.info(f"HNP rule {rule_id} fired: {explanation}")
            return Verdict(Outcome.HOLDS, rule_id, explanation)

    logger.info("No HNP rule applies")
    return Verdict(Outcome.INCONCLUSIVE, None, "no rule of the catalogue applies")


def check_verdict(profiles: Sequence[FieldProfile], facts: MultiFieldFacts, verdict: Verdict) -> bool:
    """
    Re-checks a verdict independently of the rule order.

    A HOLDS verdict is confirmed when its rule's conditions hold, an
    INCONCLUSIVE verdict when no rule applies.
    """

    if verdict.holds:
        return RULES[verdict.rule_id](profiles, facts) is not None
    return all(RULES[rule_id](profiles, facts) is None for rule_id in RULE_ORDER)


def explain_rules(filter_text: str | None = None) -> str:
    """
    Lists the catalogue, one rule per line.

    Args:
        filter_text (str, optional): "case N" keeps the rules of case N, any other
            text keeps the rules whose id or condition contains it.
    """

    catalogue = RuleCatalogue()
    rule_ids = catalogue.get_rule_ids()
    if filter_text:
        words = filter_text.lower().split()
        if len(words) == 2 and words[0] == "case" and words[1].isdigit():
            rule_ids = catalogue.rules_for_case(int(words[1]))
        else:
            needle = filter_text.lower()
            rule_ids = [
                rule_id for rule_id in rule_ids
                if needle in rule_id or needle in catalogue.get_rule(rule_id)["condition"].lower()
            ]
    return "\n".join(catalogue.get_rule_summary(rule_id) for rule_id in rule_ids)


def morishita_note(facts: MultiFieldFacts, field_count: int = 2) -> str | None:
    """
    Note emitted when rule 2b applies: for two fields with disjoint Galois
    closures, the Sha term of Morishita's class number formula equals 1.
    """

    if field_count == 2 and facts.pairwise_closure_disjoint:
        return "K_1^c and K_2^c intersect in k: the Sha term of Morishita's class number formula is 1"
    return None
