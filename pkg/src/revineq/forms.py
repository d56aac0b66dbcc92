"""Construction and evaluation of the named weighted-sum inequality forms.

A form compares a double sum against a single sum, both sides weighted:

    LHS = sum_{mu in outer} lam_mu * (sum_{nu in inner(mu)} a_nu * gam_nu)**p
    RHS = C * sum_{mu in rhs}  lam_mu * (mu * a_mu * gam_mu)**p

The inner range is either a head (``nu = h..mu``) or a tail (``nu = mu..m``).
Every named form fixes the direction (GE / LE / EQUIV), the admissible p
range, the index shifts of the three ranges and a minimal m/n multiple.
Evaluation always computes the RHS without any constant; the constant only
enters in :func:`check_holds`, so one evaluation serves both checking and
constant estimation.

Form identifiers (the wire names used by the CLI and certificates):

* ``HL_1_1`` .. ``HL_1_4`` -- the classical upper/lower comparisons with
  power weights ``mu**(a-1)`` / ``mu**(-a-1)`` and unit inner weight;
  arbitrary non-negative sequences.
* ``T2_1`` .. ``T2_4``     -- the reverse comparisons for decreasing
  sequences with explicit quasi-lacunary-monotone weight pairs.
* ``T5_1a/b``, ``T5_2a/b`` -- the T2 forms specialized to power weights.
* ``C5_1a/b``, ``C5_2a/b`` -- full-range variants anchored at 1 (the
  ``C5_2`` pair states a two-sided equivalence).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadConstantError,
    BadExponentError,
    InputFormatError,
    InvalidRangeError,
    NotDecreasingError,
    PreconditionError,
)
from .numeric import (
    EXACT,
    Number,
    as_fraction,
    as_mpf,
    format_number,
    ge_with_slack,
    is_integral,
    le_with_slack,
    npow,
)
from .sequences import (
    PowerWeight,
    Sequence,
    dyadic_bracket,
    is_nonneg_decreasing,
    ones,
    power_sequence,
)

GE = "GE"
LE = "LE"
EQUIV = "EQUIV"

RATIO_INF = math.inf


@dataclass(frozen=True)
class _FormTemplate:
    direction: str
    p_range: str  # "ge1" | "le1" | "pos"
    multiple: int
    explicit_weights: bool
    lambda_sign: int  # +1: mu**(alpha-1), -1: mu**(-alpha-1); 0 for explicit
    gamma_from_exp: bool  # power inner weight nu**lambda_exp (else unit)
    inner_kind: str  # "head" | "tail"
    inner_start: str  # head anchor: "n" | "4n" | "1"
    outer_start: str
    rhs_start: str
    requires_decreasing: bool
    fixed_lower_index: bool  # lower index pinned to 1 (full-range family)


_TEMPLATES: dict[str, _FormTemplate] = {
    "HL_1_1": _FormTemplate(LE, "ge1", 1, False, +1, False, "tail", "-", "n", "n", False, False),
    "HL_1_2": _FormTemplate(LE, "ge1", 1, False, -1, False, "head", "n", "n", "n", False, False),
    "HL_1_3": _FormTemplate(GE, "le1", 1, False, +1, False, "tail", "-", "n", "n", False, False),
    "HL_1_4": _FormTemplate(GE, "le1", 1, False, -1, False, "head", "n", "n", "n", False, False),
    "T2_1": _FormTemplate(GE, "ge1", 16, True, 0, False, "head", "n", "n", "4n", True, False),
    "T2_2": _FormTemplate(GE, "ge1", 16, True, 0, False, "tail", "-", "n", "8n", True, False),
    "T2_3": _FormTemplate(LE, "le1", 4, True, 0, False, "head", "4n", "4n", "n", True, False),
    "T2_4": _FormTemplate(LE, "le1", 4, True, 0, False, "tail", "-", "4n", "n", True, False),
    "T5_1a": _FormTemplate(GE, "ge1", 16, False, +1, True, "tail", "-", "n", "8n", True, False),
    "T5_1b": _FormTemplate(GE, "ge1", 4, False, -1, True, "head", "n", "n", "4n", True, False),
    "T5_2a": _FormTemplate(LE, "le1", 4, False, +1, True, "tail", "-", "4n", "n", True, False),
    "T5_2b": _FormTemplate(LE, "le1", 4, False, -1, True, "head", "4n", "4n", "n", True, False),
    "C5_1a": _FormTemplate(GE, "pos", 1, False, +1, True, "tail", "-", "1", "1", True, True),
    "C5_1b": _FormTemplate(GE, "pos", 1, False, -1, True, "head", "1", "1", "1", True, True),
    "C5_2a": _FormTemplate(EQUIV, "ge1", 1, False, +1, True, "tail", "-", "1", "1", True, True),
    "C5_2b": _FormTemplate(EQUIV, "ge1", 1, False, -1, True, "head", "1", "1", "1", True, True),
}

FORM_IDS = tuple(_TEMPLATES)


@dataclass(frozen=True)
class InequalityForm:
    """A fully resolved inequality instance, ready to evaluate."""

    id: str
    direction: str
    p: Fraction
    outer_weight: Sequence
    inner_weight: Sequence
    outer_range: tuple[int, int]
    inner_kind: str
    inner_anchor: int  # head: first inner index; tail: last inner index (= m)
    rhs_range: tuple[int, int]
    n: int
    m: int
    multiple: int
    requires_decreasing: bool
    alpha: Fraction | None = None
    lambda_exp: Fraction | None = None

    def inner_range(self, mu: int) -> tuple[int, int]:
        """Inner summation bounds for outer index mu (may be empty: lo > hi)."""
        if self.inner_kind == "head":
            return (self.inner_anchor, mu)
        return (mu, self.inner_anchor)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "direction": self.direction,
            "p": format_number(self.p),
            "n": self.n,
            "m": self.m,
            "alpha": None if self.alpha is None else format_number(self.alpha),
            "lambda_exp": None if self.lambda_exp is None else format_number(self.lambda_exp),
            "outer_range": list(self.outer_range),
            "inner": {"kind": self.inner_kind, "anchor": self.inner_anchor},
            "rhs_range": list(self.rhs_range),
            "multiple": self.multiple,
            "requires_decreasing": self.requires_decreasing,
            "outer_weight": self.outer_weight.to_json(),
            "inner_weight": self.inner_weight.to_json(),
        }

    @staticmethod
    def from_json(payload) -> "InequalityForm":
        if isinstance(payload, str):
            payload = json.loads(payload)
        try:
            return InequalityForm(
                id=payload["id"],
                direction=payload["direction"],
                p=as_fraction(payload["p"]),
                outer_weight=Sequence.from_json(payload["outer_weight"]),
                inner_weight=Sequence.from_json(payload["inner_weight"]),
                outer_range=tuple(payload["outer_range"]),
                inner_kind=payload["inner"]["kind"],
                inner_anchor=payload["inner"]["anchor"],
                rhs_range=tuple(payload["rhs_range"]),
                n=payload["n"],
                m=payload["m"],
                multiple=payload["multiple"],
                requires_decreasing=payload["requires_decreasing"],
                alpha=None if payload.get("alpha") is None else as_fraction(payload["alpha"]),
                lambda_exp=(
                    None
                    if payload.get("lambda_exp") is None
                    else as_fraction(payload["lambda_exp"])
                ),
            )
        except (KeyError, TypeError) as exc:
            raise InputFormatError(f"bad form payload: {exc}") from exc


@dataclass(frozen=True)
class EvalResult:
    """Both sides of a form, the bare ratio, and whether arithmetic was exact."""

    lhs: Number
    rhs0: Number
    ratio: object  # Number, math.inf, or None for 0/0
    exact: bool

    @property
    def indeterminate(self) -> bool:
        return self.ratio is None

    def to_json(self) -> dict:
        if self.ratio is None:
            ratio = "nan"
        elif self.ratio == RATIO_INF:
            ratio = "inf"
        else:
            ratio = format_number(self.ratio)
        return {
            "lhs": format_number(self.lhs),
            "rhs0": format_number(self.rhs0),
            "ratio": ratio,
            "exact": self.exact,
        }


def _weighted_range_sum(a: Sequence, w: Sequence, lo: int, hi: int) -> Number:
    if not 1 <= lo <= hi:
        raise InvalidRangeError(f"empty or reversed range [{lo}, {hi}]")
    if hi > len(a) or hi > len(w):
        raise InvalidRangeError(f"range [{lo}, {hi}] exceeds sequence length")
    if a.mode == EXACT and w.mode == EXACT:
        return sum((a[i] * w[i] for i in range(lo, hi + 1)), Fraction(0))
    return sum((as_mpf(a[i]) * as_mpf(w[i]) for i in range(lo, hi + 1)), as_mpf(0))


def head_sum(a: Sequence, w: Sequence, lo: int, hi: int) -> Number:
    """sum_{nu=lo}^{hi} a_nu * w_nu where hi is the moving outer index."""
    return _weighted_range_sum(a, w, lo, hi)


def tail_sum(a: Sequence, w: Sequence, lo: int, hi: int) -> Number:
    """sum_{nu=lo}^{hi} a_nu * w_nu where lo is the moving outer index."""
    return _weighted_range_sum(a, w, lo, hi)


def power_sum_norm(b: Sequence, alpha, lo: int = 1, hi: int | None = None) -> Number:
    """(sum_{mu=lo}^{hi} b_mu**alpha)**(1/alpha); float unless alpha == 1."""
    alpha = as_fraction(alpha)
    if alpha <= 0:
        raise BadExponentError("alpha must be positive")
    if hi is None:
        hi = len(b)
    if not 1 <= lo <= hi <= len(b):
        raise InvalidRangeError(f"range [{lo}, {hi}] invalid for length {len(b)}")
    if b.mode == EXACT and alpha == 1:
        return sum((b[i] for i in range(lo, hi + 1)), Fraction(0))
    ab = as_mpf(alpha)
    total = sum((npow(as_mpf(b[i]), ab) for i in range(lo, hi + 1)), as_mpf(0))
    return npow(total, 1 / ab)


def verify_jensen(b: Sequence, alpha, beta, lo: int = 1, hi: int | None = None):
    """Check the power-sum norm comparison: the beta-norm never exceeds the alpha-norm.

    For exact sequences with integer exponents the comparison is done on
    cross powers, with no root extraction, so a ``False`` return in that
    regime is a genuine arithmetic bug rather than roundoff.

    Returns ``(holds, lhs, rhs)`` with ``lhs`` the beta-norm, ``rhs`` the
    alpha-norm.
    """
    alpha = as_fraction(alpha)
    beta = as_fraction(beta)
    if not 0 < alpha < beta:
        raise BadExponentError(f"need 0 < alpha < beta, got alpha={alpha}, beta={beta}")
    if hi is None:
        hi = len(b)
    lhs = power_sum_norm(b, beta, lo, hi)
    rhs = power_sum_norm(b, alpha, lo, hi)
    if b.mode == EXACT and is_integral(alpha) and is_integral(beta):
        ia, ib = int(alpha), int(beta)
        sum_beta = sum((b[i] ** ib for i in range(lo, hi + 1)), Fraction(0))
        sum_alpha = sum((b[i] ** ia for i in range(lo, hi + 1)), Fraction(0))
        holds = sum_beta**ia <= sum_alpha**ib
    else:
        holds = le_with_slack(lhs, rhs)
    return holds, lhs, rhs


def _resolve_start(token: str, n: int) -> int:
    if token == "n":
        return n
    if token == "4n":
        return 4 * n
    if token == "8n":
        return 8 * n
    if token == "1":
        return 1
    raise InputFormatError(f"unknown range token {token!r}")


def _check_p_range(form_id: str, p_range: str, p: Fraction) -> None:
    if p_range == "ge1" and not p >= 1:
        raise BadExponentError(f"{form_id} requires p >= 1, got {p}")
    if p_range == "le1" and not 0 < p <= 1:
        raise BadExponentError(f"{form_id} requires 0 < p <= 1, got {p}")
    if p_range == "pos" and not p > 0:
        raise BadExponentError(f"{form_id} requires p > 0, got {p}")


def make_named_form(
    form_id: str,
    *,
    p,
    n: int,
    m: int,
    alpha=None,
    lambda_exp=None,
    outer_weight=None,
    inner_weight=None,
) -> InequalityForm:
    """Build a fully resolved named form.

    Power-weight families (HL/T5/C5) take ``alpha`` (and ``lambda_exp`` where
    the inner weight is a power) and forbid explicit weights; the T2 family
    takes explicit ``outer_weight``/``inner_weight`` (Sequence or
    PowerWeight).  The m/n multiple precondition is enforced here, naming the
    multiple that failed.
    """
    try:
        tpl = _TEMPLATES[form_id]
    except KeyError:
        raise InputFormatError(f"unknown form id {form_id!r}; known: {', '.join(FORM_IDS)}")
    p = as_fraction(p)
    _check_p_range(form_id, tpl.p_range, p)
    if not isinstance(n, int) or not isinstance(m, int) or n < 1:
        raise InvalidRangeError("n and m must be positive integers")
    if n > m:
        raise InvalidRangeError(f"need n <= m, got n={n}, m={m}")
    if tpl.fixed_lower_index and n != 1:
        raise PreconditionError(f"{form_id} is a full-range form: its lower index n must be 1")
    if m < tpl.multiple * n:
        raise PreconditionError(
            f"precondition violated for {form_id}: requires m >= {tpl.multiple}n (got n={n}, m={m})"
        )
    bracket = dyadic_bracket(n, m)
    wlen = 2 ** (bracket.M + 1)

    alpha_frac = None
    exp_frac = None
    if tpl.explicit_weights:
        if outer_weight is None or inner_weight is None:
            raise PreconditionError(f"{form_id} takes explicit outer and inner weight sequences")
        if alpha is not None or lambda_exp is not None:
            raise InputFormatError(f"{form_id} takes explicit weights, not exponents")
        lam = outer_weight.materialize(wlen) if isinstance(outer_weight, PowerWeight) else outer_weight
        gam = inner_weight.materialize(wlen) if isinstance(inner_weight, PowerWeight) else inner_weight
        if len(lam) < m or len(gam) < m:
            raise InvalidRangeError(f"weight sequences must cover 1..{m}")
    else:
        if outer_weight is not None or inner_weight is not None:
            raise InputFormatError(f"{form_id} derives its weights from exponents")
        if alpha is None:
            raise BadExponentError(f"{form_id} needs alpha > 0")
        alpha_frac = as_fraction(alpha)
        if alpha_frac <= 0:
            raise BadExponentError(f"{form_id} needs alpha > 0, got {alpha_frac}")
        lam = power_sequence(
            alpha_frac - 1 if tpl.lambda_sign > 0 else -alpha_frac - 1, wlen
        )
        if tpl.gamma_from_exp:
            exp_frac = as_fraction(lambda_exp) if lambda_exp is not None else Fraction(0)
            gam = power_sequence(exp_frac, wlen)
        else:
            if lambda_exp is not None:
                raise InputFormatError(f"{form_id} has a unit inner weight; lambda_exp not accepted")
            gam = ones(wlen)

    outer_lo = _resolve_start(tpl.outer_start, n)
    rhs_lo = _resolve_start(tpl.rhs_start, n)
    inner_anchor = m if tpl.inner_kind == "tail" else _resolve_start(tpl.inner_start, n)
    return InequalityForm(
        id=form_id,
        direction=tpl.direction,
        p=p,
        outer_weight=lam,
        inner_weight=gam,
        outer_range=(outer_lo, m),
        inner_kind=tpl.inner_kind,
        inner_anchor=inner_anchor,
        rhs_range=(rhs_lo, m),
        n=n,
        m=m,
        multiple=tpl.multiple,
        requires_decreasing=tpl.requires_decreasing,
        alpha=alpha_frac,
        lambda_exp=exp_frac,
    )


def eval_form(form: InequalityForm, a: Sequence) -> EvalResult:
    """Evaluate both sides of a form on the sequence ``a`` (no constant on the RHS)."""
    if len(a) < form.m:
        raise InvalidRangeError(f"sequence of length {len(a)} does not cover 1..{form.m}")
    if form.requires_decreasing and not is_nonneg_decreasing(a):
        raise NotDecreasingError(f"{form.id} requires a non-negative decreasing sequence")
    exact = (
        a.mode == EXACT
        and form.outer_weight.mode == EXACT
        and form.inner_weight.mode == EXACT
        and is_integral(form.p)
    )
    m = form.m
    if exact:
        av = [a[i] for i in range(1, m + 1)]
        lv = [form.outer_weight[i] for i in range(1, m + 1)]
        gv = [form.inner_weight[i] for i in range(1, m + 1)]
        zero = Fraction(0)
        k = int(form.p)

        def powp(x):
            return x**k

    else:
        av = [as_mpf(a[i]) for i in range(1, m + 1)]
        lv = [as_mpf(form.outer_weight[i]) for i in range(1, m + 1)]
        gv = [as_mpf(form.inner_weight[i]) for i in range(1, m + 1)]
        zero = as_mpf(0)
        pb = as_mpf(form.p)

        def powp(x):
            return npow(x, pb)

    prod = [av[i] * gv[i] for i in range(m)]
    inner = [zero] * (m + 2)  # inner[mu] for mu = 1..m, 1-indexed
    if form.inner_kind == "tail":
        acc = zero
        for mu in range(form.inner_anchor, 0, -1):
            acc = acc + prod[mu - 1]
            inner[mu] = acc
    else:
        h = form.inner_anchor
        acc = zero
        for mu in range(h, m + 1):
            acc = acc + prod[mu - 1]
            inner[mu] = acc

    lhs = zero
    for mu in range(form.outer_range[0], form.outer_range[1] + 1):
        term = inner[mu]
        if form.inner_kind == "head" and mu < form.inner_anchor:
            term = zero  # empty head range
        lhs = lhs + lv[mu - 1] * powp(term)
    rhs0 = zero
    for mu in range(form.rhs_range[0], form.rhs_range[1] + 1):
        rhs0 = rhs0 + lv[mu - 1] * powp(mu * av[mu - 1] * gv[mu - 1])

    if rhs0 > 0:
        ratio = lhs / rhs0
    elif lhs > 0:
        ratio = RATIO_INF
    else:
        ratio = None
    return EvalResult(lhs=lhs, rhs0=rhs0, ratio=ratio, exact=exact)


def _scaled_rhs(result: EvalResult, c):
    if isinstance(result.rhs0, Fraction) and isinstance(c, Fraction):
        return c * result.rhs0
    return as_mpf(c) * as_mpf(result.rhs0)


def check_holds(form: InequalityForm, a: Sequence, c) -> bool:
    """Does the form hold on ``a`` with constant ``c``?  A 0/0 instance counts as holding."""
    c = c if isinstance(c, Fraction) else as_fraction(c) if isinstance(c, (int, str)) else c
    if not c > 0:
        raise BadConstantError("the constant must be positive")
    if form.direction == EQUIV:
        raise InputFormatError("two-sided forms need two constants; use check_equiv")
    result = eval_form(form, a)
    if result.indeterminate:
        return True
    bound = _scaled_rhs(result, c)
    if form.direction == GE:
        return ge_with_slack(result.lhs, bound)
    return le_with_slack(result.lhs, bound)


def check_equiv(form: InequalityForm, a: Sequence, c_lower, c_upper) -> bool:
    """Two-sided check: c_lower * rhs0 <= lhs <= c_upper * rhs0."""
    if not (c_lower > 0 and c_upper > 0):
        raise BadConstantError("both constants must be positive")
    if not c_lower <= c_upper:
        raise BadConstantError("need c_lower <= c_upper")
    result = eval_form(form, a)
    if result.indeterminate:
        return True
    if result.rhs0 == 0:
        return False  # lhs > 0 cannot be bounded above by 0
    lo = _scaled_rhs(result, c_lower)
    hi = _scaled_rhs(result, c_upper)
    return ge_with_slack(result.lhs, lo) and le_with_slack(result.lhs, hi)


class FormEvaluator:
    """float64 fast path for repeated evaluations of one form.

    Used by random search and bulk validation, where thousands of sequences
    are pushed through the same form and 15 significant digits are plenty;
    anything close to a decision boundary is re-checked with the precise
    :func:`eval_form` path by the callers.
    """

    def __init__(self, form: InequalityForm):
        self.form = form
        self.m = form.m
        self.p = float(form.p)
        self.lam = [float(form.outer_weight[i]) for i in range(1, self.m + 1)]
        self.gam = [float(form.inner_weight[i]) for i in range(1, self.m + 1)]
        self.outer = form.outer_range
        self.rhs = form.rhs_range
        self.inner_kind = form.inner_kind
        self.inner_anchor = form.inner_anchor

    def evaluate(self, a: list) -> tuple[float, float]:
        """(lhs, rhs0) for a 0-indexed list of floats covering 1..m."""
        m, p = self.m, self.p
        lam, gam = self.lam, self.gam
        prod = [a[i] * gam[i] for i in range(m)]
        inner = [0.0] * (m + 2)
        if self.inner_kind == "tail":
            acc = 0.0
            for mu in range(self.inner_anchor, 0, -1):
                acc += prod[mu - 1]
                inner[mu] = acc
        else:
            acc = 0.0
            for mu in range(self.inner_anchor, m + 1):
                acc += prod[mu - 1]
                inner[mu] = acc
        lhs = 0.0
        for mu in range(self.outer[0], self.outer[1] + 1):
            t = inner[mu]
            if t > 0.0:
                lhs += lam[mu - 1] * (t**p)
        rhs0 = 0.0
        for mu in range(self.rhs[0], self.rhs[1] + 1):
            t = mu * a[mu - 1] * gam[mu - 1]
            if t > 0.0:
                rhs0 += lam[mu - 1] * (t**p)
        return lhs, rhs0

    def ratio(self, a: list) -> float:
        lhs, rhs0 = self.evaluate(a)
        if rhs0 > 0.0:
            return lhs / rhs0
        return math.inf if lhs > 0.0 else math.nan
