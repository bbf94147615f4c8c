"""Shared tolerance set.

Every numerical decision in the package (rank cuts, containment, membership,
orthonormality) is taken against an explicit tolerance.  Functions accept the
relevant tolerance as a keyword argument; this dataclass bundles the defaults
so that a scenario run can carry one coherent, reportable tolerance set.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict, replace


@dataclass(frozen=True)
class Tolerances:
    #: relative rank cut sigma <= rank_rel * sigma_max; None selects the
    #: size-aware policy 1e-10 * max(rows, cols)
    rank_rel: float | None = None
    #: max |Gram - I| entry allowed for a family declared orthonormal
    ortho: float = 1e-8
    #: unit-circle isometry deviation allowed for an inner symbol
    inner: float = 1e-8
    #: polynomial roots closer than this to |z| = 1 refuse to factor
    circle_margin: float = 1e-6
    #: min |det| on the closed disk for invertible analytic symbols
    invertibility_margin: float = 1e-6
    #: defect-into-prediction containment (series-inversion scenarios)
    containment: float = 1e-6
    #: defect-into-prediction containment (exact polynomial scenarios)
    containment_strict: float = 1e-8
    #: mutual-containment threshold defining subspace equality
    subspace_equality: float = 1e-8
    #: allowed 1 - cos(angle) for directions counted into an intersection
    intersection: float = 1e-8
    #: membership residual for reassembled coordinate vectors
    membership: float = 1e-6
    #: absolute singular-value floor below which defect directions are noise
    defect_floor: float = 1e-8
    #: reconstruction / isometry residual for coordinate extraction
    representation: float = 1e-8
    #: relative model-space mass below which a vector counts as in-range
    range_membership: float = 1e-8
    #: sigma-gap ratio above which a rank decision is flagged inconclusive
    sigma_ratio_flag: float = 1e-3

    def to_json(self) -> dict:
        return asdict(self)

    def override(self, **kwargs) -> "Tolerances":
        return replace(self, **kwargs)


DEFAULT_TOLERANCES = Tolerances()


def rank_threshold(shape: tuple[int, int], sigma_max: float,
                   rank_rel: float | None = None) -> float:
    """Singular-value cut for the given matrix shape.

    The default policy scales with the matrix size so that desk-scale
    problems keep a wide margin between genuine directions and roundoff.
    """
    if rank_rel is None:
        rank_rel = 1e-10 * max(shape)
    return rank_rel * sigma_max
