"""Explicit admissible constants for the four reverse comparisons T2_1..T2_4.

Each certificate is assembled as a product of per-step factors, one factor
per inequality in a dyadic-block proof chain.  Every factor is a function of
the weight profiles (direction, dyadic ratio bounds K1/K2), the exponent p,
and, for tail-type upper bounds, the geometric partial-sum constant of the
derived sequence ``i -> 2^i * lam[2^i]``.  Factors are individually
property-testable: each one states a concrete inequality about block sums of
profile-matching sequences.

Derivation conventions, with ``u = upper one-dyad ratio bound``,
``bmin``/``bmax`` the within-block value bounds relative to the block's left
dyadic endpoint:

* lower chains (GE forms) restrict to a dyadic window, split both sums into
  dyadic blocks, pull the inner block sums out with ``bmin`` factors, apply
  p-th power superadditivity, swap the summation order, keep one term of the
  resulting dyadic sum, and reconstitute the shifted single sum block by
  block (where the dyadic index gap costs powers of 2 and of the ratio
  bounds);
* upper chains (LE forms) run the same skeleton with ``bmax`` factors,
  subadditivity, and a summability bound for the swapped dyadic sum: the
  geometric partial-sum constant for tail forms, a dyadic tail-sum bound for
  head forms.

The head-form upper bound (T2_3) genuinely needs that tail-sum bound: with
``2 * u(lam) >= 1`` no constant uniform over all windows exists (a step
sequence with a long zero tail makes the ratio grow with m), so in that
regime the factor is derived for windows with ``m/n`` below an explicit cap,
recorded on the certificate.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    BadConstantError,
    BadExponentError,
    IncompleteProfileError,
    MissingGeometricConstantError,
    PreconditionError,
)
from .forms import FormEvaluator, check_holds, make_named_form
from .numeric import Number, as_fraction, as_mpf, format_number, is_integral, mixed, npow
from .sequences import (
    DECREASING,
    NEITHER,
    Sequence,
    SequenceProfile,
    dyadic_bracket,
    dyadic_weighted_transform,
    geometric_constant,
    random_decreasing,
)

LOWER = "lower"
UPPER = "upper"

OFFSET_TWO_DYADS_T2_2 = "two_dyads_T2_2"
OFFSET_ONE_DYAD_T2_1 = "one_dyad_T2_1"
OFFSET_ONE_DYAD_T2_34 = "one_dyad_T2_34"

GE_IDS = ("T2_1", "T2_2")
LE_IDS = ("T2_3", "T2_4")
CERT_IDS = GE_IDS + LE_IDS

DEFAULT_MAX_WINDOW_RATIO = 4096

_ONE = Fraction(1)
_TWO = Fraction(2)


def _mul(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return as_mpf(a) * as_mpf(b)


def _div(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a / b
    return as_mpf(a) / as_mpf(b)


def _min1(x):
    if isinstance(x, Fraction):
        return min(x, _ONE)
    return min(as_mpf(x), as_mpf(1))


def _max1(x):
    if isinstance(x, Fraction):
        return max(x, _ONE)
    return max(as_mpf(x), as_mpf(1))


def _require_profile(profile: SequenceProfile, who: str) -> None:
    if profile.direction == NEITHER:
        raise IncompleteProfileError(f"{who}: profile direction must be monotone")
    if profile.K1 is None or profile.K2 is None:
        raise IncompleteProfileError(f"{who}: profile lacks dyadic ratio constants")
    if not profile.K1 > 0:
        raise IncompleteProfileError(f"{who}: dyadic ratio constants must be positive")


def _up1(profile: SequenceProfile):
    """Upper bound on a single dyadic step s[2^(v+1)]/s[2^v] for matching sequences."""
    if profile.direction == DECREASING:
        return _min1(profile.K2)
    return profile.K2


def _block_min(profile: SequenceProfile):
    """Lower bound on s over the block (2^v, 2^(v+1)] relative to s[2^v]."""
    if profile.direction == DECREASING:
        return profile.K1
    return _ONE


def _block_max(profile: SequenceProfile):
    """Upper bound on s over the block (2^v, 2^(v+1)] relative to s[2^v]."""
    if profile.direction == DECREASING:
        return _ONE
    return profile.K2


def block_sum_factor(profile: SequenceProfile, bound: str):
    """Factor c for dyadic block sums of a profile-matching sequence.

    lower: sum over (2^(i-1), 2^i] is >= c * 2^(i-1) * s[2^(i-1)]
    upper: sum over (2^i, 2^(i+1)] is <= c * 2^i * s[2^i]

    Decreasing sequences bound blocks below through the next dyadic value
    (one K1), increasing ones through the block's left endpoint (factor 1);
    the upper bounds mirror this with K2.
    """
    _require_profile(profile, "block_sum_factor")
    if bound == LOWER:
        return _block_min(profile)
    if bound == UPPER:
        return _block_max(profile)
    raise BadConstantError(f"bound must be 'lower' or 'upper', got {bound!r}")


def inner_block_factor(profile: SequenceProfile, bound: str = LOWER):
    """Same block-sum bound for the inner weight, blocks (2^j, 2^(j+1)] vs 2^j * s[2^j]."""
    return block_sum_factor(profile, bound)


def geometric_top_term_factor(kgeo, mode: str):
    """Factor for collapsing a dyadic sum after the summation swap.

    ``lower_trivial``: a sum of non-negative terms dominates its top term --
    factor 1, no hypothesis needed.  ``upper_geo``: the partial sums of
    ``2^i * lam[2^i]`` are bounded by Kgeo times the last term -- factor Kgeo.
    """
    if mode == "lower_trivial":
        return _ONE
    if mode == "upper_geo":
        if kgeo is None:
            raise MissingGeometricConstantError("upper_geo mode needs a geometric constant")
        if kgeo < 1:
            raise BadConstantError(f"a geometric partial-sum constant is >= 1, got {kgeo}")
        return kgeo
    raise BadConstantError(f"unknown mode {mode!r}")


def jensen_step_factor(p, direction: str):
    """The p-th power sum comparison contributes no constant; factor 1.

    ``GE_p_ge_1``: (sum x)^p >= sum x^p for p >= 1.
    ``LE_p_le_1``: (sum x)^p <= sum x^p for 0 < p <= 1.
    """
    p = as_fraction(p)
    if direction == "GE_p_ge_1":
        if not p >= 1:
            raise BadExponentError(f"superadditive use needs p >= 1, got {p}")
    elif direction == "LE_p_le_1":
        if not 0 < p <= 1:
            raise BadExponentError(f"subadditive use needs 0 < p <= 1, got {p}")
    else:
        raise BadConstantError(f"unknown direction {direction!r}")
    return _ONE


def _pth(x, p):
    if isinstance(x, Fraction) and is_integral(p):
        return x ** int(p)
    return npow(x, p)


def block_reconstitution_factor(
    lambda_profile: SequenceProfile,
    gamma_profile: SequenceProfile,
    p,
    offset: str,
):
    """Factor converting kept dyadic terms into blocks of the target single sum.

    Combines, per block, the monotone step of ``a`` across the dyad gap, the
    weight comparability across one or two dyads (powers of the ratio
    bounds), and the ratio between ``mu**p`` on the block and the kept
    ``2**(j*p)``:

    * ``two_dyads_T2_2``: kept term at dyad j-1, target block
      (2^(j+1), 2^(j+2)] -- a GE factor below 1;
    * ``one_dyad_T2_1``: kept term at dyad j+1, target block
      (2^(j+1), 2^(j+2)] -- a GE factor below 1;
    * ``one_dyad_T2_34``: kept term at dyad j, target block
      (2^(j-1), 2^j] -- an LE factor above 1.
    """
    _require_profile(lambda_profile, "block_reconstitution_factor(outer)")
    _require_profile(gamma_profile, "block_reconstitution_factor(inner)")
    p = as_fraction(p)
    if not p > 0:
        raise BadExponentError(f"p must be positive, got {p}")
    u_lam = _up1(lambda_profile)
    u_gam = _up1(gamma_profile)
    if offset == OFFSET_TWO_DYADS_T2_2:
        denom = _pth(_TWO, 2 * p + 2)
        denom = _mul(denom, _pth(_mul(_block_max(gamma_profile), u_gam), p))
        denom = _mul(denom, _block_max(lambda_profile))
        denom = _mul(denom, _mul(u_lam, u_lam))
        return _div(_ONE, denom)
    if offset == OFFSET_ONE_DYAD_T2_1:
        denom = _pth(_TWO, 2 * p)
        denom = _mul(denom, _pth(_mul(_block_max(gamma_profile), u_gam), p))
        denom = _mul(denom, _block_max(lambda_profile))
        return _div(_ONE, denom)
    if offset == OFFSET_ONE_DYAD_T2_34:
        out = _pth(_TWO, p + 1)
        out = _mul(out, _pth(_div(u_gam, _block_min(gamma_profile)), p))
        out = _mul(out, _div(u_lam, _block_min(lambda_profile)))
        return out
    raise BadConstantError(f"unknown offset {offset!r}")


def top_range_absorption_factor(
    lambda_profile: SequenceProfile,
    gamma_profile: SequenceProfile,
    p,
):
    """Factor 1/(1 + c) absorbing the topmost dyadic range into the head chain.

    The head-form lower chain covers the shifted sum only up to the last full
    dyadic block; the remaining range (2^M, m] is dominated, term family by
    term family, by c times the block (2^(M-1), 2^M] it sits next to, using
    that ``a`` decreases across 2^M and that both weights are dyadically
    comparable.  Folding that back in costs 1/(1 + c).
    """
    _require_profile(lambda_profile, "top_range_absorption_factor(outer)")
    _require_profile(gamma_profile, "top_range_absorption_factor(inner)")
    p = as_fraction(p)
    c = _pth(_TWO, 2 * p + 1)
    c = _mul(c, _pth(_div(_mul(_block_max(gamma_profile), _up1(gamma_profile)), _block_min(gamma_profile)), p))
    c = _mul(c, _div(_block_max(lambda_profile), _block_min(lambda_profile)))
    c = _mul(c, _up1(lambda_profile))
    if isinstance(c, Fraction):
        return _ONE / (_ONE + c)
    return as_mpf(1) / (as_mpf(1) + c)


def dyadic_tail_sum_factor(
    lambda_profile: SequenceProfile,
    max_window_ratio: int | None = DEFAULT_MAX_WINDOW_RATIO,
):
    """Bound on tail sums of ``2^i * lam[2^i]`` relative to their first term.

    A single dyadic step multiplies ``2^i * lam[2^i]`` by at most
    ``q = 2 * u(lam)``.  For ``q < 1`` the geometric tail gives the
    window-free factor ``1/(1 - q)``.  Otherwise no window-free factor
    exists and the factor is the partial geometric sum for window ratios
    ``m/n <= max_window_ratio``.

    Returns ``(factor, recorded_cap)`` where the cap is None in the
    window-free regime.
    """
    _require_profile(lambda_profile, "dyadic_tail_sum_factor")
    u = _up1(lambda_profile)
    q = _mul(_TWO, u)
    if q < 1:
        if isinstance(q, Fraction):
            return _ONE / (_ONE - q), None
        return as_mpf(1) / (as_mpf(1) - q), None
    if max_window_ratio is None or max_window_ratio < 4:
        raise BadConstantError(
            "with 2*K2 >= 1 the head-form tail factor needs a window cap (max m/n) of at least 4"
        )
    depth = max_window_ratio.bit_length() - 1 - 1  # floor(log2(cap)) - 1
    total = _ONE if isinstance(q, Fraction) else as_mpf(1)
    power = total
    for _ in range(depth):
        power = _mul(power, q)
        total = total + power
    return total, max_window_ratio


@dataclass(frozen=True)
class CertificateStep:
    label: str
    factor: Number
    anchor: str

    def to_json(self) -> dict:
        return {"label": self.label, "factor": format_number(self.factor), "anchor": self.anchor}


@dataclass(frozen=True)
class ConstantCertificate:
    """An explicit admissible constant with its labeled per-step factors.

    For GE certificates, ``check_holds(form, a, C)`` is guaranteed for every
    window with ``m >= 16n``, every non-negative decreasing ``a`` covering
    the window, and every weight pair matching the recorded profiles (with
    one dyad of headroom past m and, where recorded, transform geometric
    constant at most Kgeo).  LE certificates give the mirror guarantee for
    ``m >= 4n``; a T2_3 certificate with a recorded window cap is valid for
    ``m/n`` up to that cap.
    """

    inequality_id: str
    lambda_profile: SequenceProfile
    gamma_profile: SequenceProfile
    kgeo: Number | None
    p: Fraction
    steps: tuple[CertificateStep, ...]
    C: Number
    max_window_ratio: int | None = None

    def to_json(self) -> dict:
        return {
            "id": self.inequality_id,
            "inputs": {
                "lambda_profile": self.lambda_profile.to_json(),
                "gamma_profile": self.gamma_profile.to_json(),
                "Kgeo": None if self.kgeo is None else format_number(self.kgeo),
                "p": format_number(self.p),
                "max_window_ratio": self.max_window_ratio,
            },
            "steps": [s.to_json() for s in self.steps],
            "C": format_number(self.C),
        }


def derive_constant(
    inequality_id: str,
    lambda_profile: SequenceProfile,
    gamma_profile: SequenceProfile,
    *,
    p,
    kgeo=None,
    max_window_ratio: int | None = DEFAULT_MAX_WINDOW_RATIO,
) -> ConstantCertificate:
    """Assemble the certificate for one of T2_1..T2_4 from profile data.

    Kgeo (the geometric partial-sum constant of ``i -> 2^i * lam[2^i]``) is
    required for the tail forms T2_2/T2_4 and rejected for the head forms;
    the T2_2 lower chain records it without consuming it (its dyadic sum is
    collapsed to a single term, which needs no summability).
    """
    if inequality_id not in CERT_IDS:
        raise BadConstantError(f"certificates exist for {CERT_IDS}, not {inequality_id!r}")
    _require_profile(lambda_profile, "derive_constant(outer)")
    _require_profile(gamma_profile, "derive_constant(inner)")
    p = as_fraction(p)
    is_ge = inequality_id in GE_IDS
    if is_ge and not p >= 1:
        raise BadExponentError(f"{inequality_id} requires p >= 1, got {p}")
    if not is_ge and not 0 < p <= 1:
        raise BadExponentError(f"{inequality_id} requires 0 < p <= 1, got {p}")
    needs_kgeo = inequality_id in ("T2_2", "T2_4")
    if needs_kgeo and kgeo is None:
        raise MissingGeometricConstantError(f"{inequality_id} needs the transform geometric constant")
    if not needs_kgeo and kgeo is not None:
        raise BadConstantError(f"{inequality_id} must not depend on a geometric constant")
    if kgeo is not None and kgeo < 1:
        raise BadConstantError(f"a geometric partial-sum constant is >= 1, got {kgeo}")

    steps: list[CertificateStep] = []
    cap = None
    if inequality_id == "T2_1":
        steps.append(
            CertificateStep(
                "outer_block_sum",
                block_sum_factor(lambda_profile, LOWER),
                "each dyadic block sum of the outer weight dominates this factor "
                "times (block length) x (left dyadic value)",
            )
        )
        steps.append(
            CertificateStep(
                "inner_block_sum",
                _pth(inner_block_factor(gamma_profile, LOWER), p),
                "inner-weight dyadic block sums dominate this factor's p-th root "
                "times (block length) x (left dyadic value); enters inside the p-th power",
            )
        )
        steps.append(
            CertificateStep(
                "power_superadditivity",
                jensen_step_factor(p, "GE_p_ge_1"),
                "(sum of non-negative terms)^p >= sum of p-th powers for p >= 1",
            )
        )
        steps.append(
            CertificateStep(
                "dyadic_sum_bottom_term",
                _ONE,
                "after swapping the summation order, a sum of non-negative dyadic "
                "terms dominates its lowest-index term",
            )
        )
        steps.append(
            CertificateStep(
                "block_reconstitution",
                block_reconstitution_factor(lambda_profile, gamma_profile, p, OFFSET_ONE_DYAD_T2_1),
                "each kept dyadic term dominates this factor times the matching "
                "block of the shifted single sum (one-dyad weight transfer, mu^p <= (4*2^j)^p)",
            )
        )
        steps.append(
            CertificateStep(
                "top_range_absorption",
                top_range_absorption_factor(lambda_profile, gamma_profile, p),
                "the range above the last full dyadic block is dominated by a "
                "multiple of its left neighbour block, since a decreases and the "
                "weights are dyadically comparable",
            )
        )
    elif inequality_id == "T2_2":
        steps.append(
            CertificateStep(
                "outer_block_sum",
                block_sum_factor(lambda_profile, LOWER),
                "each dyadic block sum of the outer weight dominates this factor "
                "times (block length) x (left dyadic value)",
            )
        )
        steps.append(
            CertificateStep(
                "inner_block_sum",
                _pth(inner_block_factor(gamma_profile, LOWER), p),
                "inner-weight dyadic block sums dominate this factor's p-th root "
                "times (block length) x (left dyadic value); enters inside the p-th power",
            )
        )
        steps.append(
            CertificateStep(
                "power_superadditivity",
                jensen_step_factor(p, "GE_p_ge_1"),
                "(sum of non-negative terms)^p >= sum of p-th powers for p >= 1",
            )
        )
        steps.append(
            CertificateStep(
                "dyadic_sum_top_term",
                geometric_top_term_factor(kgeo, "lower_trivial"),
                "after swapping the summation order, a sum of non-negative dyadic "
                "terms dominates its top term; the recorded geometric constant is "
                "not consumed by this lower bound",
            )
        )
        steps.append(
            CertificateStep(
                "block_reconstitution",
                block_reconstitution_factor(lambda_profile, gamma_profile, p, OFFSET_TWO_DYADS_T2_2),
                "each kept dyadic term dominates this factor times the matching "
                "block of the shifted single sum (two-dyad weight transfer, mu^p <= (4*2^j)^p)",
            )
        )
    else:  # T2_3 / T2_4
        steps.append(
            CertificateStep(
                "outer_block_sum",
                block_sum_factor(lambda_profile, UPPER),
                "each dyadic block sum of the outer weight is at most this factor "
                "times (block length) x (left dyadic value)",
            )
        )
        steps.append(
            CertificateStep(
                "inner_block_sum",
                _pth(inner_block_factor(gamma_profile, UPPER), p),
                "inner-weight dyadic block sums are at most this factor's p-th root "
                "times (block length) x (left dyadic value); enters inside the p-th power",
            )
        )
        steps.append(
            CertificateStep(
                "power_subadditivity",
                jensen_step_factor(p, "LE_p_le_1"),
                "(sum of non-negative terms)^p <= sum of p-th powers for 0 < p <= 1",
            )
        )
        if inequality_id == "T2_4":
            steps.append(
                CertificateStep(
                    "dyadic_partial_sum_geometric",
                    geometric_top_term_factor(kgeo, "upper_geo"),
                    "partial sums of 2^i * lam[2^i] are bounded by the geometric "
                    "constant times their last term",
                )
            )
        else:
            factor, cap = dyadic_tail_sum_factor(lambda_profile, max_window_ratio)
            steps.append(
                CertificateStep(
                    "dyadic_tail_sum",
                    factor,
                    "tail sums of 2^i * lam[2^i] are bounded by this factor times "
                    "their first term (geometric tail of the one-step ratio 2*K2; "
                    "window-capped when that ratio reaches 1)",
                )
            )
        steps.append(
            CertificateStep(
                "block_reconstitution",
                block_reconstitution_factor(lambda_profile, gamma_profile, p, OFFSET_ONE_DYAD_T2_34),
                "each kept dyadic term is at most this factor times the matching "
                "lower block of the target single sum (one-dyad weight transfer, "
                "mu^p > (2^j/2)^p)",
            )
        )

    c_value = steps[0].factor
    for step in steps[1:]:
        c_value = _mul(c_value, step.factor)
    return ConstantCertificate(
        inequality_id=inequality_id,
        lambda_profile=lambda_profile,
        gamma_profile=gamma_profile,
        kgeo=kgeo,
        p=p,
        steps=tuple(steps),
        C=c_value,
        max_window_ratio=cap,
    )


def transform_geometric_constant(lam: Sequence, mmax: int) -> Number:
    """Geometric partial-sum constant of ``i -> 2^i * lam[2^i]`` for i = 1..mmax."""
    return geometric_constant(dyadic_weighted_transform(lam, mmax), mmax)


def profile_transform_geo_bound(profile: SequenceProfile, max_dyads: int) -> Number:
    """Upper bound on the transform geometric constant of ANY profile-matching weight.

    One dyadic step multiplies ``2^i * s[2^i]`` by at least ``2 * d`` with
    ``d`` the lower one-dyad ratio bound, so earlier terms are at most
    ``(2d)^-t`` times the last one; summing min(max_dyads, closed form) terms
    bounds every matching sequence on windows up to that many dyads.
    """
    _require_profile(profile, "profile_transform_geo_bound")
    d = profile.K1 if profile.direction == DECREASING else _max1(profile.K1)
    q = _div(_ONE, _mul(_TWO, d))  # ratio of consecutive transform terms, reversed
    total = _ONE if isinstance(q, Fraction) else as_mpf(1)
    power = total
    for _ in range(max_dyads - 1):
        power = _mul(power, q)
        total = total + power
    return total


def sample_matching_weights(
    profile: SequenceProfile,
    length: int,
    rng: random.Random,
) -> Sequence:
    """Random sequence matching a profile: stated direction, dyadic ratios in [K1, K2].

    Dyadic values are chained with ratios drawn inside the admissible band
    (intersected with what monotonicity allows); the entries inside each
    dyadic block interpolate its endpoints monotonically.  ``length`` must be
    a power of two so every block is complete.
    """
    _require_profile(profile, "sample_matching_weights")
    if length & (length - 1) != 0:
        raise PreconditionError("sampler needs a power-of-two length")
    exact = isinstance(profile.K1, Fraction) and isinstance(profile.K2, Fraction)
    one = _ONE if exact else as_mpf(1)
    if profile.direction == DECREASING:
        lo_r, hi_r = profile.K1, _min1(profile.K2)
    else:
        lo_r, hi_r = _max1(profile.K1), profile.K2
    if lo_r > hi_r:
        raise IncompleteProfileError("profile admits no sequence: ratio band is empty")

    def draw(lo, hi):
        if exact:
            t = Fraction(rng.randint(0, 48), 48)
        else:
            t = as_mpf(rng.random())
        return lo + (hi - lo) * t

    levels = length.bit_length() - 1
    dyadic = [one]  # value at index 2^0
    for _ in range(levels):
        dyadic.append(_mul(dyadic[-1], draw(lo_r, hi_r)))
    values = [one] * length
    values[0] = dyadic[0]
    for v in range(levels):
        left, right = dyadic[v], dyadic[v + 1]
        block_lo, block_hi = 2**v + 1, 2 ** (v + 1)
        interior = [draw(*((right, left) if right <= left else (left, right))) for _ in range(block_hi - block_lo)]
        interior.sort(reverse=profile.direction == DECREASING)
        for offset, idx in enumerate(range(block_lo, block_hi)):
            values[idx - 1] = interior[offset]
        values[block_hi - 1] = right
    scale = Fraction(2) ** rng.randint(-2, 2)
    if exact:
        return Sequence.exact(v * scale for v in values)
    return Sequence.floats(_mul(v, scale) for v in values)


@dataclass
class ValidationReport:
    """Outcome of hammering a certificate with random admissible instances."""

    trials: int
    pass_count: int
    fail_count: int
    min_ratio_over_c: float | None
    max_ratio_over_c: float | None
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "pass_count": self.pass_count,
            "fail_count": self.fail_count,
            "min_ratio_over_c": self.min_ratio_over_c,
            "max_ratio_over_c": self.max_ratio_over_c,
            "failures": self.failures,
        }


_DEFAULT_GE_WINDOWS = ((1, 16), (2, 32), (4, 64))
_DEFAULT_LE_WINDOWS = ((1, 4), (2, 8), (4, 16))
_DIST_CYCLE = ("uniform", "sparse", "heavy", "step", "positive")


def validate_certificate(
    cert: ConstantCertificate,
    trials: int,
    seed: int,
    *,
    windows=None,
    weights_factory=None,
    boundary_rel: float = 1e-6,
) -> ValidationReport:
    """Run check_holds over random admissible instances; failures are data.

    Instances cycle through the windows and increment distributions; the
    default weights are fresh profile-matching random sequences per trial
    (rejecting, for tail forms, samples whose transform geometric constant
    exceeds the certificate's Kgeo).  A float fast path screens each trial
    and anything failing or within ``boundary_rel`` of the decision boundary
    is re-checked with precise arithmetic, which is authoritative.
    """
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    is_ge = cert.inequality_id in GE_IDS
    if windows is None:
        windows = _DEFAULT_GE_WINDOWS if is_ge else _DEFAULT_LE_WINDOWS
    if cert.max_window_ratio is not None:
        for n, m in windows:
            if m > cert.max_window_ratio * n:
                raise PreconditionError(
                    f"window ({n}, {m}) exceeds the certificate's m/n cap {cert.max_window_ratio}"
                )
    rng = random.Random(seed)
    needs_kgeo = cert.inequality_id in ("T2_2", "T2_4")

    def sample_pair(window, rng_):
        n, m = window
        bracket = dyadic_bracket(n, m)
        wlen = 2 ** (bracket.M + 2)
        for _ in range(200):
            lam = sample_matching_weights(cert.lambda_profile, wlen, rng_)
            if needs_kgeo:
                actual, budget_k = mixed(transform_geometric_constant(lam, bracket.M), cert.kgeo)
                if actual > budget_k:
                    continue
            gam = sample_matching_weights(cert.gamma_profile, wlen, rng_)
            return lam, gam
        raise PreconditionError(
            "could not sample weights whose transform geometric constant fits the certificate"
        )

    # A deterministic pool of weight pairs per window keeps weight variety
    # while letting the fast evaluators be reused across trials.
    pools: dict = {}
    pool_cursor: dict = {}

    def default_factory(window, rng_):
        pool = pools.get(window)
        if pool is None:
            pool = [sample_pair(window, rng_) for _ in range(16)]
            pools[window] = pool
            pool_cursor[window] = 0
        i = pool_cursor[window]
        pool_cursor[window] = (i + 1) % len(pool)
        return pool[i]

    factory = weights_factory or default_factory
    c_float = float(cert.C)
    evaluator_cache: dict = {}
    report = ValidationReport(trials=trials, pass_count=0, fail_count=0,
                              min_ratio_over_c=None, max_ratio_over_c=None)
    for t in range(trials):
        window = windows[t % len(windows)]
        dist = _DIST_CYCLE[t % len(_DIST_CYCLE)]
        n, m = window
        lam, gam = factory(window, rng)
        key = (window, id(lam), id(gam))
        cached = evaluator_cache.get(key)
        if cached is None:
            form = make_named_form(
                cert.inequality_id, p=cert.p, n=n, m=m, outer_weight=lam, inner_weight=gam
            )
            cached = (form, FormEvaluator(form))
            if len(evaluator_cache) < 64:
                evaluator_cache[key] = cached
        form, fast = cached
        a = random_decreasing(m, rng.randrange(2**32), dist)
        a_floats = [float(v) for v in a.values]
        lhs, rhs0 = fast.evaluate(a_floats)
        bound = c_float * rhs0
        scale = max(abs(lhs), abs(bound), 1.0)
        margin = (lhs - bound) if is_ge else (bound - lhs)
        ok = margin >= 0.0
        borderline = abs(margin) <= boundary_rel * scale
        if not ok or borderline:
            ok = check_holds(form, a, cert.C)
        if rhs0 > 0.0:
            r_over_c = (lhs / rhs0) / c_float
            if report.min_ratio_over_c is None or r_over_c < report.min_ratio_over_c:
                report.min_ratio_over_c = r_over_c
            if report.max_ratio_over_c is None or r_over_c > report.max_ratio_over_c:
                report.max_ratio_over_c = r_over_c
        if ok:
            report.pass_count += 1
        else:
            report.fail_count += 1
            if len(report.failures) < 10:
                report.failures.append(
                    {
                        "trial": t,
                        "window": list(window),
                        "dist": dist,
                        "lhs": lhs,
                        "rhs0": rhs0,
                        "C": c_float,
                    }
                )
    return report
