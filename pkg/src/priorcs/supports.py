"""Support-set arithmetic for prior-support sparse recovery.

Everything here is index bookkeeping: best k-term approximations, the
(rho, alpha) geometry of a prior support T against the top-k support T0, and
the l1 error terms that multiply the guarantee coefficients. Indices are
0-based throughout the Python API; the CLI and CSV serializations are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidInputError


def best_k_term(x, k: int):
    """Best k-term approximation of x and its support.

    Keeps the k largest-magnitude entries (ties broken by lowest index) and
    zeros the rest. Returns (x_k, T0) where T0 is the support of x_k; T0 can
    have fewer than k elements when x has fewer than k nonzeros.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    if not 1 <= k <= n:
        raise InvalidInputError(f"k must be in [1, {n}], got {k}")
    # lexsort uses the last key as primary: magnitude descending, then index.
    order = np.lexsort((np.arange(n), -np.abs(x)))[:k]
    x_k = np.zeros(n)
    x_k[order] = x[order]
    t0 = tuple(sorted(int(i) for i in order if x[i] != 0.0))
    return x_k, t0


@dataclass(frozen=True)
class SupportModel:
    """Prior-support geometry: |T| = rho*k and |T inter T0| = alpha*|T|.

    rho and alpha are stored both as floats and as exact rationals; the
    rationals satisfy the integer identities exactly.
    """

    n: int
    k: int
    T: tuple
    T0: tuple
    rho: float
    alpha: float
    w: float
    rho_exact: Fraction
    alpha_exact: Fraction

    @property
    def overlap(self) -> int:
        return len(set(self.T) & set(self.T0))


def support_model(x, T, k: int, w: float) -> SupportModel:
    """Build the (rho, alpha, w) geometry of prior support T for signal x."""
    x = np.asarray(x, dtype=float)
    n = x.size
    t = tuple(sorted(int(i) for i in T))
    if len(set(t)) != len(t):
        raise InvalidInputError("T contains duplicate indices")
    if t and (t[0] < 0 or t[-1] >= n):
        raise InvalidInputError(f"T must be a subset of [0, {n}), got {t}")
    if not 0.0 <= w <= 1.0:
        raise InvalidInputError(f"w must be in [0, 1], got {w}")
    _, t0 = best_k_term(x, k)
    rho = Fraction(len(t), k)
    alpha = Fraction(len(set(t) & set(t0)), len(t)) if t else Fraction(0)
    return SupportModel(
        n=n, k=k, T=t, T0=t0,
        rho=float(rho), alpha=float(alpha), w=float(w),
        rho_exact=rho, alpha_exact=alpha,
    )


@dataclass(frozen=True)
class ErrorTerms:
    """The l1 error pieces multiplying C1 in the recovery guarantees.

    e_local adds the missed-top-support mass that the local bound carries;
    e_global is the multiplier shared by the global bounds. e_proof is the
    equivalent form w*|x on T minus T0|_1 + |x off T|_1, kept separate so the
    algebraic identity e_proof == e_local can be tested directly.
    """

    tail_k: float
    off_prior_off_top: float
    missed_top: float
    e_local: float
    e_global: float
    e_proof: float


def error_terms(x, model: SupportModel) -> ErrorTerms:
    """Evaluate all error-multiplier pieces for x under the given geometry."""
    x = np.asarray(x, dtype=float)
    if x.size != model.n:
        raise InvalidInputError(f"x has length {x.size}, model expects {model.n}")
    ax = np.abs(x)
    in_t = np.zeros(model.n, dtype=bool)
    in_t[list(model.T)] = True
    in_t0 = np.zeros(model.n, dtype=bool)
    in_t0[list(model.T0)] = True

    tail_k = float(ax[~in_t0].sum())
    off_prior_off_top = float(ax[~in_t & ~in_t0].sum())
    missed_top = float(ax[~in_t & in_t0].sum())
    on_prior_off_top = float(ax[in_t & ~in_t0].sum())
    off_prior = float(ax[~in_t].sum())
    w = model.w
    return ErrorTerms(
        tail_k=tail_k,
        off_prior_off_top=off_prior_off_top,
        missed_top=missed_top,
        e_local=w * tail_k + (1.0 - w) * off_prior_off_top + missed_top,
        e_global=w * tail_k + (1.0 - w) * off_prior_off_top,
        e_proof=w * on_prior_off_top + off_prior,
    )


def prior_support_for(x, k: int, rho: float, alpha: float):
    """Construct a prior support T with |T| = rho*k and |T inter T0| = alpha*rho*k.

    The overlap takes the largest-magnitude indices of T0 first; the remainder
    is filled with the lowest indices outside T0, which keeps the construction
    deterministic. Raises when the requested sizes are not integers or cannot
    be met by the signal.
    """
    x = np.asarray(x, dtype=float)
    n = x.size
    t_size = _as_count(rho * k, "rho*k")
    overlap = _as_count(alpha * rho * k, "alpha*rho*k")
    if overlap > t_size:
        raise InvalidInputError(f"overlap {overlap} exceeds |T| = {t_size}")
    if t_size > n:
        raise InvalidInputError(f"|T| = {t_size} exceeds the dimension {n}")
    _, t0 = best_k_term(x, k)
    if overlap > len(t0):
        raise InvalidInputError(
            f"requested overlap {overlap} but the top-{k} support has only {len(t0)} entries"
        )
    fill = t_size - overlap
    outside = [i for i in range(n) if i not in set(t0)]
    if fill > len(outside):
        raise InvalidInputError(
            f"cannot place {fill} indices outside the top-{k} support (only {len(outside)} available)"
        )
    by_magnitude = sorted(t0, key=lambda i: (-abs(x[i]), i))
    chosen = by_magnitude[:overlap] + outside[:fill]
    return tuple(sorted(chosen))


def _as_count(value: float, label: str) -> int:
    rounded = round(value)
    if abs(value - rounded) > 1e-9 or rounded < 0:
        raise InvalidInputError(f"{label} must be a nonnegative integer, got {value}")
    return int(rounded)


def format_index_set(indices) -> str:
    """Serialize 0-based indices as sorted 1-based comma-separated integers."""
    return ",".join(str(i + 1) for i in sorted(indices))


def parse_index_set(text: str, n: int):
    """Parse a 1-based comma-separated index list into a sorted 0-based tuple."""
    text = text.strip()
    if not text:
        return ()
    out = []
    for part in text.split(","):
        try:
            one_based = int(part)
        except ValueError as exc:
            raise InvalidInputError(f"bad index {part!r} in index set") from exc
        if not 1 <= one_based <= n:
            raise InvalidInputError(f"index {one_based} out of range 1..{n}")
        out.append(one_based - 1)
    if len(set(out)) != len(out):
        raise InvalidInputError("duplicate indices in index set")
    return tuple(sorted(out))
