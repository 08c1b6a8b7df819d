"""Incompressibility certificates for surfaces in cyclic amalgams.

For G = J *_<w> K with w homologically trivial and of infinite order on both
sides, the infimal Gromov-Thurston norm over classes mapping to the generator
is 2(scl_J(w) + scl_K(w)). A closed surface S without sphere or torus
components representing such a class is geometrically incompressible whenever
the strict inequality  norm > -chi(S) - 2  holds, and is pi_1-injective when
-chi(S) equals the norm. This module evaluates the norm from solver runs
and/or externally supplied scl values, applies the criterion exactly, and
packages four ready-made families (example1..example4) behind a stable JSON
schema.

The cover-index bound quantifies how far the certificate reaches into finite
covers: a compression in a degree-m cover needs m*norm <= m*(-chi) - 2, so no
loop can compress in covers of degree below 2/(-chi - norm). The bound is a
derived quantity and is labeled as such in output.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from .errors import (
    DegenerateFamily,
    InvalidInput,
    InvalidSurface,
    MissingExternalScl,
    NegativeScl,
    ProperPowerRelator,
)
from .rationals import Rational, rat, rat_ceil, rat_str
from .scl import LpStats, solve_chain
from .words import (
    Chain,
    Letter,
    Word,
    commutator,
    cyclic_reduce,
    is_homologically_trivial,
    parse_word,
    product_of_commutators,
    seifert_family_word,
)


class Verdict(Enum):
    INCOMPRESSIBLE = "incompressible"
    INCONCLUSIVE = "inconclusive"
    NORM_MINIMIZING_INJECTIVE = "norm_minimizing_injective"


@dataclass(frozen=True)
class ExternalInput:
    name: str
    value: Rational
    provenance: str


@dataclass(frozen=True)
class FactorDescriptor:
    """One side of the amalgam: a free group we can solve, or an external
    group whose scl value is supplied with provenance."""

    word_image: Word
    rank: Optional[int] = None
    external_name: Optional[str] = None
    external_scl: Optional[Rational] = None
    provenance: Optional[str] = None

    @staticmethod
    def free(word_image: Word, rank: Optional[int] = None) -> "FactorDescriptor":
        if word_image.is_identity:
            raise DegenerateFamily("factor word is trivial")
        if not is_homologically_trivial(word_image):
            raise InvalidInput(
                f"word {word_image} is not homologically trivial in its factor"
            )
        return FactorDescriptor(
            word_image=word_image,
            rank=rank if rank is not None else word_image.max_rank(),
        )

    @staticmethod
    def external(
        name: str,
        word_image: Word,
        scl_value: Optional[Rational],
        provenance: str,
    ) -> "FactorDescriptor":
        if scl_value is None:
            raise MissingExternalScl(f"external factor {name} needs an scl value")
        scl_value = rat(scl_value)
        if scl_value < 0:
            raise NegativeScl(f"scl value {scl_value} is negative")
        return FactorDescriptor(
            word_image=word_image,
            external_name=name,
            external_scl=scl_value,
            provenance=provenance,
        )

    @property
    def is_external(self) -> bool:
        return self.external_name is not None


@dataclass(frozen=True)
class AmalgamSpec:
    left: FactorDescriptor
    right: FactorDescriptor
    h2_trivial_both: bool = True

    def __post_init__(self):
        for side, factor in (("left", self.left), ("right", self.right)):
            if factor.word_image.is_identity:
                raise DegenerateFamily(f"{side} word image is trivial")


@dataclass(frozen=True)
class SurfaceData:
    """A closed oriented certificate surface, described by component genera."""

    components: tuple[int, ...]

    def __post_init__(self):
        if not self.components:
            raise InvalidSurface("surface needs at least one component")
        for g in self.components:
            if g < 2:
                raise InvalidSurface(
                    f"component of genus {g}: sphere and torus components "
                    "are not allowed"
                )

    @staticmethod
    def genus(g: int) -> "SurfaceData":
        return SurfaceData((g,))

    @property
    def chi(self) -> int:
        return sum(2 - 2 * g for g in self.components)


@dataclass(frozen=True)
class CertificateVerdict:
    family: str
    word: Optional[str]
    scl_left: Rational
    scl_right: Rational
    norm_lower_bound: Rational
    norm_is_exact: bool
    chi: int
    verdict: Verdict
    norm_in_two_Z: bool
    min_cover_index: Optional[int]  # None encodes infinity
    solver_stats: Optional[LpStats] = None
    solver_mode: Optional[str] = None
    external_inputs: tuple[ExternalInput, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def conditional(self) -> bool:
        return bool(self.external_inputs)

    def to_json_dict(self) -> dict:
        solver = None
        if self.solver_stats is not None:
            solver = {
                "mode": self.solver_mode,
                "variables": self.solver_stats.variables,
                "rows": self.solver_stats.rows,
                "wall_ms": self.solver_stats.wall_ms,
            }
        return {
            "family": self.family,
            "word": self.word,
            "scl_left": rat_str(self.scl_left),
            "scl_right": rat_str(self.scl_right),
            "norm": rat_str(self.norm_lower_bound),
            "norm_is_exact": self.norm_is_exact,
            "chi": self.chi,
            "verdict": self.verdict.value,
            "norm_in_2Z": self.norm_in_two_Z,
            "min_cover_index": (
                "infinity" if self.min_cover_index is None
                else self.min_cover_index
            ),
            "solver": solver,
            "external_inputs": [
                {
                    "name": e.name,
                    "value": rat_str(e.value),
                    "provenance": e.provenance,
                }
                for e in self.external_inputs
            ],
            "notes": list(self.notes),
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)


def _factor_scl(factor: FactorDescriptor) -> tuple[Rational, Optional[object]]:
    """scl of the factor word, plus the solve record when computed."""
    if factor.is_external:
        if factor.external_scl is None:
            raise MissingExternalScl(
                f"external factor {factor.external_name} has no scl value"
            )
        return factor.external_scl, None
    cw, _ = cyclic_reduce(factor.word_image)
    record = solve_chain(Chain([(cw, 1)]))
    return record.result.value, record


def amalgam_norm(spec: AmalgamSpec) -> Rational:
    """2 (scl_left(w) + scl_right(w)): the infimal norm over the classes
    hitting the generator; the exact norm when both factors have trivial H2,
    and a lower bound for every such class otherwise."""
    left, _ = _factor_scl(spec.left)
    right, _ = _factor_scl(spec.right)
    return rat(2) * (left + right)


def min_cover_index(norm: Rational, chi: int) -> Optional[int]:
    """Smallest cover degree in which a compression is not ruled out.

    Returns None (infinity) when the norm equals -chi. Raises InvalidInput
    when norm exceeds -chi, which no genuine certificate context produces.
    """
    norm = rat(norm)
    if norm > -chi:
        raise InvalidInput(f"norm {norm} exceeds -chi = {-chi}")
    if norm == -chi:
        return None
    return max(1, rat_ceil(rat(2) / (rat(-chi) - norm)))


def check_certificate(
    norm: Rational,
    surface: SurfaceData,
    *,
    family: str = "amalgam",
    word: Optional[str] = None,
    scl_left: Rational = None,
    scl_right: Rational = None,
    norm_is_exact: bool = True,
    solver_stats: Optional[LpStats] = None,
    solver_mode: Optional[str] = None,
    external_inputs: Sequence[ExternalInput] = (),
    notes: Sequence[str] = (),
) -> CertificateVerdict:
    """Apply the norm criterion to a surface, exactly.

    Incompressible when -chi - 2 < norm < -chi (both strict), norm-minimizing
    (hence injective) when norm = -chi, inconclusive when norm <= -chi - 2.
    """
    norm = rat(norm)
    chi = surface.chi
    if norm > -chi:
        raise InvalidInput(
            f"norm {norm} exceeds -chi = {-chi}; the surface cannot represent "
            "the class"
        )
    if norm == -chi:
        verdict = Verdict.NORM_MINIMIZING_INJECTIVE
    elif norm > -chi - 2:
        verdict = Verdict.INCOMPRESSIBLE
    else:
        verdict = Verdict.INCONCLUSIVE
    return CertificateVerdict(
        family=family,
        word=word,
        scl_left=rat(scl_left) if scl_left is not None else norm / 2,
        scl_right=rat(scl_right) if scl_right is not None else rat(0),
        norm_lower_bound=norm,
        norm_is_exact=norm_is_exact,
        chi=chi,
        verdict=verdict,
        norm_in_two_Z=(norm.denominator == 1 and norm.numerator % 2 == 0),
        min_cover_index=min_cover_index(norm, chi),
        solver_stats=solver_stats,
        solver_mode=solver_mode,
        external_inputs=tuple(external_inputs),
        notes=tuple(notes),
    )


def certify_amalgam(
    spec: AmalgamSpec,
    surface: SurfaceData,
    *,
    family: str = "amalgam",
    word: Optional[str] = None,
    notes: Sequence[str] = (),
) -> CertificateVerdict:
    """Norm of the amalgamated class from the factor scl values, then the
    certificate check against the given surface."""
    scl_left, record_left = _factor_scl(spec.left)
    scl_right, record_right = _factor_scl(spec.right)
    norm = rat(2) * (scl_left + scl_right)
    externals = []
    for side, factor in (("left", spec.left), ("right", spec.right)):
        if factor.is_external:
            externals.append(
                ExternalInput(
                    name=f"scl_{factor.external_name}({factor.word_image})",
                    value=factor.external_scl,
                    provenance=factor.provenance or side,
                )
            )
    record = record_left or record_right
    return check_certificate(
        norm,
        surface,
        family=family,
        word=word,
        scl_left=scl_left,
        scl_right=scl_right,
        norm_is_exact=spec.h2_trivial_both and not externals,
        solver_stats=record.result.lp_stats if record else None,
        solver_mode=record.result.mode if record else None,
        external_inputs=externals,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# The four packaged families
# ---------------------------------------------------------------------------

_A = Word((Letter(0),))
_B = Word((Letter(1),))
_C = Word((Letter(2),))


def _commutator_pair_word(v: Word) -> Word:
    """w = [a,b][c,v]; degenerate when [c,v] is trivial."""
    cv = commutator(_C, v)
    if cv.is_identity:
        raise DegenerateFamily(
            f"[c, {v}] is trivial (v is a power of c), the family degenerates"
        )
    return commutator(_A, _B) * cv


def _free_relator(genus: int) -> Word:
    pairs = [
        (Word((Letter(2 * i),)), Word((Letter(2 * i + 1),)))
        for i in range(genus)
    ]
    return product_of_commutators(pairs)


def build_example1(v: Word | str) -> CertificateVerdict:
    """Genus-3 closed surface in the double of w = [a,b][c,v] against a
    once-punctured torus; incompressible exactly when scl(w) > 1/2."""
    return build_example2(v, 1)


def build_example2(v: Word | str, g: int) -> CertificateVerdict:
    """Genus g+2 closed surface for w = [a,b][c,v] amalgamated to a genus-g
    one-relator side; reduces to the example1 family at g = 1."""
    if isinstance(v, str):
        v = parse_word(v)
    if g < 1:
        raise InvalidInput(f"genus parameter must be >= 1, got {g}")
    w = _commutator_pair_word(v)
    left = FactorDescriptor.free(w, rank=max(3, w.max_rank()))
    relator = _free_relator(g)
    right = FactorDescriptor.free(relator, rank=2 * g)
    spec = AmalgamSpec(left=left, right=right, h2_trivial_both=True)
    family = "example1" if g == 1 else "example2"
    return certify_amalgam(
        spec,
        SurfaceData.genus(g + 2),
        family=family,
        word=str(w),
        notes=(
            "cover index bound is derived from the norm gap",
        ),
    )


def build_example3(
    scl_H_of_comm: Rational, provenance: str
) -> CertificateVerdict:
    """Genus-2 closed surface over an external 2-generator factor H:
    norm = 1 + 2*scl_H([a,b]), incompressible whenever the norm is positive
    and below 2."""
    scl_H = rat(scl_H_of_comm)
    if scl_H < 0:
        raise NegativeScl(f"scl_H([a,b]) = {scl_H} is negative")
    comm = commutator(_A, _B)
    left = FactorDescriptor.external(
        "H", comm, scl_H, provenance
    )
    right = FactorDescriptor.free(comm, rank=2)
    spec = AmalgamSpec(left=left, right=right, h2_trivial_both=False)
    return certify_amalgam(
        spec,
        SurfaceData.genus(2),
        family="example3",
        word=str(comm),
        notes=(
            "norm is exact only if H2 of the external factor vanishes; "
            "the verdict uses it as a lower bound",
        ),
    )


@dataclass(frozen=True)
class SeifertFamilyReport:
    """Report for the balanced relator family; no verdict is computed
    because scl in the one-relator quotient is outside solver scope."""

    N: int
    relator: str
    relator_is_proper_power: bool
    reference_scl: Rational
    reference_provenance: str
    free_upper_bound: Rational
    target_interval: tuple[Rational, Rational]
    external_inputs: tuple[ExternalInput, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "family": "example4",
            "N": self.N,
            "relator": self.relator,
            "relator_is_proper_power": self.relator_is_proper_power,
            "reference_scl": rat_str(self.reference_scl),
            "reference_provenance": self.reference_provenance,
            "free_upper_bound": rat_str(self.free_upper_bound),
            "target_interval": [
                rat_str(self.target_interval[0]),
                rat_str(self.target_interval[1]),
            ],
            "external_inputs": [
                {
                    "name": e.name,
                    "value": rat_str(e.value),
                    "provenance": e.provenance,
                }
                for e in self.external_inputs
            ],
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)


def build_example4(
    N: int,
    signs: Sequence[int],
    conjugators: Sequence[Word | str],
) -> SeifertFamilyReport:
    """Balanced product of conjugated commutator powers as a one-relator
    quotient of F(a, b), reported against the Seifert-fibered reference value
    (N-1)/(2N) and the free upper bound scl([a,b]) = 1/2 (monotonicity under
    the quotient map)."""
    conj_words = []
    for g in conjugators:
        if isinstance(g, str):
            g = Word() if not g.strip() else parse_word(g, rank=2)
        conj_words.append(g)
    built = seifert_family_word(N, signs, conj_words)
    if built.word.is_identity:
        raise DegenerateFamily("relator collapses to the identity")
    if built.proper_power is not None:
        warnings.warn(
            f"relator is a proper power {built.proper_power[0]}^"
            f"{built.proper_power[1]}; the quotient may have torsion",
            ProperPowerRelator,
        )
    reference = rat(N - 1, 2 * N)
    cw, _ = cyclic_reduce(commutator(_A, _B))
    upper = solve_chain(Chain([(cw, 1)])).result.value
    return SeifertFamilyReport(
        N=N,
        relator=str(built.word),
        relator_is_proper_power=built.proper_power is not None,
        reference_scl=reference,
        reference_provenance="Seifert-fibered quotient value (N-1)/(2N), "
        "supplied externally",
        free_upper_bound=upper,
        target_interval=(reference, upper),
        external_inputs=(
            ExternalInput(
                name="scl_H([a,b]) reference",
                value=reference,
                provenance="external: rotation number bound in the "
                "Seifert-fibered quotient",
            ),
        ),
    )
