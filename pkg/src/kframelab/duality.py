"""Dual families of a Parseval K-frame and the checks built on them.

The canonical dual applies the pseudo-inverse of K to every sample.
Every other dual differs from it by a coefficient-valued field that the
synthesis map annihilates; the routines here construct such fields,
rebuild duals from them, and verify minimality of the canonical dual,
uniqueness, independence transfer and the coefficient norm split.

Every routine validates its Parseval hypothesis and fails loudly: the
statements being verified are false without it, and returning numbers
anyway would fake the verification.
"""

from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from .hilbert import DEFAULT_TOL, as_operator, as_vector, op_norm, svd
from .frames import (
    FrameVerdict,
    InfeasibleError,
    KOperator,
    SampledFrame,
    analysis,
    analysis_norm,
    classify,
    frame_operator,
    frames_allclose,
    is_l2_independent,
    synthesis,
    synthesis_kernel_basis,
)
from .measure import L2Coefficients, l2_norm_sq, bochner_integrate, _require_same_space
from .rng import complex_normal, stream

__all__ = [
    "HypothesisError",
    "DualityReport",
    "ResidualOperator",
    "IndependenceTransfer",
    "canonical_dual",
    "is_dual_k_bessel",
    "residual_operator",
    "build_dual_from_phi",
    "sample_kernel_field",
    "field_norm",
    "minimality_check",
    "canonical_characterization",
    "uniqueness_test",
    "construct_alternative_dual",
    "complement_parseval_check",
    "kdaggerk_frame_check",
    "l2_independence_transfer",
    "unique_dual_transfer",
    "pythagorean_decomposition",
    "dual_coefficient_family",
]


class HypothesisError(ValueError):
    """A verification routine was called outside its validity domain."""


def _require_parseval_k(frame: SampledFrame, k: KOperator, tol: float) -> None:
    if k.dim != frame.dim:
        raise HypothesisError(
            f"operator dimension {k.dim} does not match frame dimension {frame.dim}"
        )
    c = classify(frame, k, tol)
    if c.verdict is not FrameVerdict.PARSEVAL_K_FRAME:
        raise HypothesisError(
            "the family must be a Parseval K-frame; operator identity residual "
            f"{c.residuals['parseval_identity']:.3e} exceeds {tol:.1e}"
        )


def _require_dual_pair(g: SampledFrame, f: SampledFrame) -> None:
    _require_same_space(g.space, f.space)
    if g.dim != f.dim:
        raise ValueError(f"frame dimensions differ: {g.dim} and {f.dim}")


def field_norm(frame_space, phi: np.ndarray) -> float:
    """Operator norm of a pointwise field H -> L2 given by the rows of phi."""
    return op_norm(frame_space.sqrt_weights[:, None] * phi)


def canonical_dual(frame: SampledFrame, k: KOperator, tol: float = DEFAULT_TOL) -> SampledFrame:
    """Apply the pseudo-inverse of K to every sample.

    For the identity operator this collapses to the classical canonical
    dual of a Parseval frame, which is the frame itself.
    """
    _require_parseval_k(frame, k, tol)
    return SampledFrame(frame.space, frame.samples @ k.pinv.T)


@dataclass(frozen=True)
class DualityReport:
    """Outcome of a duality test: G is dual when composing the synthesis of
    F with the analysis of G reproduces K."""

    is_dual: bool
    duality_residual: float
    bessel_bound_of_g: float
    analysis_norm_of_g: float


def is_dual_k_bessel(
    g: SampledFrame, f: SampledFrame, k: KOperator, tol: float = DEFAULT_TOL
) -> DualityReport:
    """Test whether G reproduces K through F, with the residual norm."""
    _require_dual_pair(g, f)
    if k.dim != f.dim:
        raise ValueError(f"operator dimension {k.dim} does not match frame dimension {f.dim}")
    residual = op_norm(synthesis(f) @ analysis(g) - k.op)
    norm_g = analysis_norm(g)
    return DualityReport(
        is_dual=residual <= tol * (1.0 + k.norm),
        duality_residual=residual,
        bessel_bound_of_g=norm_g**2,
        analysis_norm_of_g=norm_g,
    )


@dataclass(frozen=True)
class ResidualOperator:
    """Pointwise field f -> <f, G(w) - dual(w)>; the synthesis of the base
    frame annihilates it whenever G is dual."""

    space: object
    phi: np.ndarray


def residual_operator(
    g: SampledFrame, f: SampledFrame, k: KOperator, tol: float = DEFAULT_TOL
) -> ResidualOperator:
    """Difference field between a dual G and the canonical dual."""
    _require_parseval_k(f, k, tol)
    report = is_dual_k_bessel(g, f, k, tol)
    if not report.is_dual:
        raise HypothesisError(
            f"G is not a dual K-Bessel family (residual {report.duality_residual:.3e})"
        )
    dual = canonical_dual(f, k, tol)
    return ResidualOperator(space=f.space, phi=analysis(g) - analysis(dual))


def build_dual_from_phi(
    frame: SampledFrame, k: KOperator, phi: np.ndarray, tol: float = DEFAULT_TOL
) -> SampledFrame:
    """Rebuild a dual from a field annihilated by the synthesis map.

    Adding the conjugated rows of phi to the canonical dual leaves the
    duality identity intact exactly when synthesis(frame) @ phi = 0;
    the zero field returns the canonical dual itself.
    """
    _require_parseval_k(frame, k, tol)
    phi = as_operator(phi)
    if phi.shape != (frame.space.atom_count, frame.dim):
        raise ValueError(
            f"phi must have shape ({frame.space.atom_count}, {frame.dim}), got {phi.shape}"
        )
    leak = op_norm(synthesis(frame) @ phi)
    scale = 1.0 + analysis_norm(frame) * field_norm(frame.space, phi)
    if leak > tol * scale:
        raise HypothesisError(
            f"the synthesis map does not annihilate phi (residual {leak:.3e})"
        )
    dual = canonical_dual(frame, k, tol)
    return SampledFrame(frame.space, dual.samples + np.conj(phi))


def sample_kernel_field(
    frame: SampledFrame,
    rng: np.random.Generator,
    reference_norm: float,
    norm_band: Tuple[float, float] = (0.1, 10.0),
) -> np.ndarray:
    """Random field with synthesis(frame) @ phi = 0, scaled into a norm band
    relative to ``reference_norm``. Zero when the kernel is trivial.

    The draw is a complex Gaussian pushed through the kernel projector,
    so both small and dominant perturbations are exercised as the band
    endpoints spread.
    """
    basis = synthesis_kernel_basis(frame)
    if basis.shape[1] == 0:
        return np.zeros((frame.space.atom_count, frame.dim), dtype=np.complex128)
    phi = basis @ complex_normal(rng, basis.shape[1], frame.dim)
    norm = field_norm(frame.space, phi)
    if norm == 0.0:
        return phi
    lo, hi = norm_band
    target = max(reference_norm, 1.0) * 10.0 ** rng.uniform(np.log10(lo), np.log10(hi))
    return phi * (target / norm)


def _coefficient_norm_sq(space, values: np.ndarray) -> float:
    return float(np.sum(space.weights * np.abs(values) ** 2))


def minimality_check(
    frame: SampledFrame,
    k: KOperator,
    trials: int,
    seed: int,
    tol: float = DEFAULT_TOL,
    probes_per_trial: int = 20,
) -> bool:
    """Canonical dual has the smallest analysis norm among sampled duals.

    Also checks the pointwise split: the squared coefficient norm of a
    dual's analysis equals the canonical part plus the residual field
    part, probe vector by probe vector. Zero trials pass vacuously.
    """
    _require_parseval_k(frame, k, tol)
    dual = canonical_dual(frame, k, tol)
    dual_norm = analysis_norm(dual)
    an_dual = analysis(dual)
    for t in range(int(trials)):
        rng = stream(seed, t)
        phi = sample_kernel_field(frame, rng, dual_norm)
        g = build_dual_from_phi(frame, k, phi, tol)
        g_norm = analysis_norm(g)
        if dual_norm > g_norm + tol * max(1.0, g_norm):
            return False
        an_g = analysis(g)
        for _ in range(int(probes_per_trial)):
            f = complex_normal(rng, frame.dim)
            total = _coefficient_norm_sq(frame.space, an_g @ f)
            canonical = _coefficient_norm_sq(frame.space, an_dual @ f)
            residual = _coefficient_norm_sq(frame.space, phi @ f)
            if abs(total - canonical - residual) > tol * max(1.0, float(np.vdot(f, f).real)):
                return False
    return True


def canonical_characterization(
    g: SampledFrame,
    f: SampledFrame,
    k: KOperator,
    trials: int,
    seed: int,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Whether the Gram identity against every sampled dual holds for G.

    True exactly when G is the canonical dual (up to tolerance): the
    first sampled partner is the canonical dual itself, which is the
    witness that breaks the identity for any other dual. Zero trials
    pass vacuously.
    """
    _require_parseval_k(f, k, tol)
    report = is_dual_k_bessel(g, f, k, tol)
    if not report.is_dual:
        raise HypothesisError(
            f"G is not a dual K-Bessel family (residual {report.duality_residual:.3e})"
        )
    dual = canonical_dual(f, k, tol)
    dual_norm = analysis_norm(dual)
    syn_g = synthesis(g)
    gram = syn_g @ analysis(g)
    scale = 1.0 + report.analysis_norm_of_g**2
    for t in range(int(trials)):
        if t == 0:
            partner = dual
        else:
            rng = stream(seed, t)
            phi = sample_kernel_field(f, rng, dual_norm)
            partner = build_dual_from_phi(f, k, phi, tol)
        if op_norm(gram - syn_g @ analysis(partner)) > tol * scale:
            return False
    return True


def uniqueness_test(frame: SampledFrame, k: KOperator, tol: float = DEFAULT_TOL) -> bool:
    """Whether the dual family is unique: the analysis map must fill the
    whole coefficient space, i.e. have rank equal to the atom count."""
    _require_parseval_k(frame, k, tol)
    return svd(analysis(frame)).rank == frame.space.atom_count


def construct_alternative_dual(
    frame: SampledFrame, k: KOperator, seed: int, tol: float = DEFAULT_TOL
) -> SampledFrame:
    """A verified dual different from the canonical one.

    Picks a unit coefficient function in the orthogonal complement of
    the analysis range and a unit vector h, and adds the rank-one field
    conj(alpha_i) h to the canonical dual. Orthogonality alone makes the
    result dual; infeasible when the dual is unique.
    """
    _require_parseval_k(frame, k, tol)
    basis = synthesis_kernel_basis(frame)
    if basis.shape[1] == 0:
        raise InfeasibleError("the dual family is unique; no alternative exists")
    rng = stream(seed)
    alpha = basis @ complex_normal(rng, basis.shape[1])
    alpha_norm = np.sqrt(_coefficient_norm_sq(frame.space, alpha))
    if alpha_norm == 0.0:  # measure-zero draw; fall back to a basis column
        alpha = basis[:, 0]
        alpha_norm = np.sqrt(_coefficient_norm_sq(frame.space, alpha))
    alpha = alpha / alpha_norm
    h = complex_normal(rng, frame.dim)
    h_norm = float(np.linalg.norm(h))
    if h_norm == 0.0:
        h = np.zeros(frame.dim, dtype=np.complex128)
        h[0] = 1.0
        h_norm = 1.0
    h = h / h_norm
    dual = canonical_dual(frame, k, tol)
    q = SampledFrame(frame.space, dual.samples + np.conj(alpha)[:, None] * h[None, :])
    report = is_dual_k_bessel(q, frame, k, tol)
    if not report.is_dual or frames_allclose(q, dual, tol):
        raise ArithmeticError("alternative dual construction violated its guarantee")
    return q


def complement_parseval_check(
    frame: SampledFrame,
    k: KOperator,
    trials: int,
    seed: int,
    tol: float = DEFAULT_TOL,
) -> bool:
    """Canonical dual acts as a Parseval frame on the orthogonal complement
    of the null space of K, probed with random vectors from that subspace."""
    _require_parseval_k(frame, k, tol)
    an_dual = analysis(canonical_dual(frame, k, tol))
    for t in range(int(trials)):
        rng = stream(seed, t)
        f = k.adjoint_range_projector @ complex_normal(rng, frame.dim)
        lhs = _coefficient_norm_sq(frame.space, an_dual @ f)
        rhs = float(np.vdot(f, f).real)
        if abs(lhs - rhs) > tol * (1.0 + rhs):
            return False
    return True


def kdaggerk_frame_check(frame: SampledFrame, k: KOperator, tol: float = DEFAULT_TOL) -> bool:
    """Canonical dual is Parseval for the projector pinv(K) K, and pushing it
    forward through K regenerates a Parseval K-frame."""
    _require_parseval_k(frame, k, tol)
    dual = canonical_dual(frame, k, tol)
    scale = tol * (1.0 + k.norm**2)
    p = k.adjoint_range_projector
    if op_norm(frame_operator(dual) - p @ p.conj().T) > scale:
        return False
    pushed = SampledFrame(frame.space, dual.samples @ k.op.T)
    return op_norm(frame_operator(pushed) - k.op @ k.adjoint) <= scale


class IndependenceTransfer(NamedTuple):
    frame_independent: bool
    dual_independent: bool
    reconstruction_holds: Optional[bool]


def l2_independence_transfer(
    frame: SampledFrame, k: KOperator, tol: float = DEFAULT_TOL
) -> IndependenceTransfer:
    """Independence verdicts of the frame and its canonical dual, plus the
    samplewise identity F = K dual when the frame is independent (None
    when the identity is not asserted)."""
    _require_parseval_k(frame, k, tol)
    dual = canonical_dual(frame, k, tol)
    frame_indep = is_l2_independent(frame)
    dual_indep = is_l2_independent(dual)
    reconstruction: Optional[bool] = None
    if frame_indep:
        rebuilt = dual.samples @ k.op.T
        gap = float(np.max(np.linalg.norm(frame.samples - rebuilt, axis=1)))
        reconstruction = gap <= tol * (1.0 + k.norm)
    return IndependenceTransfer(frame_indep, dual_indep, reconstruction)


def unique_dual_transfer(frame: SampledFrame, k: KOperator, tol: float = DEFAULT_TOL) -> bool:
    """When the dual of the frame is unique, the canonical dual must admit a
    unique dual with respect to the adjoint operator; verified by the rank
    of its analysis map."""
    _require_parseval_k(frame, k, tol)
    if not uniqueness_test(frame, k, tol):
        raise HypothesisError("the frame does not have a unique dual family")
    dual = canonical_dual(frame, k, tol)
    return svd(analysis(dual)).rank == frame.space.atom_count


def pythagorean_decomposition(
    frame: SampledFrame,
    k: KOperator,
    f,
    c: L2Coefficients,
    tol: float = DEFAULT_TOL,
) -> Tuple[float, float, float]:
    """Split the squared norm of reproducing coefficients into the residual
    against the canonical coefficients plus the canonical part.

    ``c`` must synthesize to K f; anything else is rejected as an invalid
    coefficient family. Returns (total, residual, canonical).
    """
    _require_parseval_k(frame, k, tol)
    f = as_vector(f)
    if f.shape[0] != frame.dim:
        raise ValueError(f"vector dimension {f.shape[0]} does not match frame dimension {frame.dim}")
    _require_same_space(frame.space, c.space)
    target = k.op @ f
    defect = float(np.linalg.norm(bochner_integrate(frame, c) - target))
    if defect > tol * (1.0 + k.norm * float(np.linalg.norm(f))):
        raise HypothesisError(
            f"coefficients do not synthesize the operator image of f (defect {defect:.3e})"
        )
    dual = canonical_dual(frame, k, tol)
    canonical_values = analysis(dual) @ f
    total = l2_norm_sq(c)
    residual = _coefficient_norm_sq(frame.space, c.values - canonical_values)
    canonical = _coefficient_norm_sq(frame.space, canonical_values)
    return total, residual, canonical


def dual_coefficient_family(
    frame: SampledFrame,
    k: KOperator,
    f,
    count: int,
    seed: int,
    tol: float = DEFAULT_TOL,
) -> List[L2Coefficients]:
    """Coefficient families that synthesize to K f, built as the canonical
    coefficients plus kernel perturbations. The first family is always the
    canonical one; later families carry seeded random kernel parts."""
    _require_parseval_k(frame, k, tol)
    f = as_vector(f)
    if f.shape[0] != frame.dim:
        raise ValueError(f"vector dimension {f.shape[0]} does not match frame dimension {frame.dim}")
    dual = canonical_dual(frame, k, tol)
    canonical_values = analysis(dual) @ f
    scale = 1.0 + np.sqrt(_coefficient_norm_sq(frame.space, canonical_values))
    basis = synthesis_kernel_basis(frame)
    out: List[L2Coefficients] = []
    for t in range(int(count)):
        if t == 0 or basis.shape[1] == 0:
            kernel_part = np.zeros(frame.space.atom_count, dtype=np.complex128)
        else:
            rng = stream(seed, t)
            kernel_part = scale * (basis @ complex_normal(rng, basis.shape[1]))
        out.append(L2Coefficients(frame.space, canonical_values + kernel_part))
    return out
