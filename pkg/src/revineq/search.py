"""Empirically sharp constants by optimization over the decreasing cone.

Three routes, in decreasing order of authority:

* ``exact_best_constant_p1`` -- at p = 1 both sides of every form are linear
  in the sequence, every non-negative decreasing sequence is a non-negative
  combination of 0/1 step sequences, and a ratio of non-negative linear
  functionals attains its extreme value on an extreme ray (the mediant
  inequality).  Enumerating the rays therefore gives the TRUE sharp constant
  over the whole cone, exactly in exact mode.
* ``grid_bruteforce`` -- exhaustive enumeration of decreasing sequences with
  entries on a uniform grid; the desk-scale oracle for any p.
* ``search_best_constant`` -- coordinate descent on the increment
  parametrization d_nu = a_nu - a_(nu+1) >= 0, so every iterate is feasible
  by construction; random restarts, deterministic in the seed.  Returns a
  ratio achieved by a feasible sequence, hence a one-sided bound on the true
  sharp constant for any p.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .errors import (
    BadExponentError,
    InputFormatError,
    NoAdmissibleRayError,
    PreconditionError,
    SearchSpaceTooLargeError,
)
from .forms import (
    EQUIV,
    GE,
    LE,
    FormEvaluator,
    InequalityForm,
    eval_form,
    make_named_form,
)
from .numeric import EXACT, Number, as_fraction, decimal_string, format_number
from .sequences import (
    PowerWeight,
    Sequence,
    harmonic_sequence,
    ones,
    random_decreasing,
    step_sequence,
)

__all__ = [
    "SearchResult",
    "step_sequence",
    "exact_best_constant_p1",
    "grid_bruteforce",
    "search_best_constant",
    "sweep",
    "SweepResult",
]

METHOD_EXACT_P1 = "step_exact_p1"
METHOD_GRID = "grid_bruteforce"
METHOD_DESCENT = "coordinate_descent"
METHOD_FIXED = "fixed_sequence"


@dataclass(frozen=True)
class SearchResult:
    """Best ratio found, the sequence achieving it, and how it was found."""

    best_ratio: Number
    argext: Sequence
    method: str
    iterations: int
    converged: bool

    def to_json(self) -> dict:
        return {
            "best_ratio": format_number(self.best_ratio),
            "argext": self.argext.to_json(),
            "method": self.method,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _is_better(candidate, incumbent, minimize: bool) -> bool:
    if incumbent is None:
        return True
    return candidate < incumbent if minimize else candidate > incumbent


def _minimizing(form: InequalityForm) -> bool:
    # EQUIV forms report the lower (GE-side) sharp constant.
    return form.direction in (GE, EQUIV)


def _normalize_argext(form: InequalityForm, a: Sequence) -> Sequence:
    """Scale so the first index with a nonzero RHS contribution carries value 1."""
    pivot = None
    for mu in range(form.rhs_range[0], form.rhs_range[1] + 1):
        if a[mu] > 0 and form.outer_weight[mu] > 0 and form.inner_weight[mu] > 0:
            pivot = a[mu]
            break
    if pivot is None:
        for mu in range(1, len(a) + 1):
            if a[mu] > 0:
                pivot = a[mu]
                break
    if pivot is None or pivot == 1:
        return a
    if a.mode == EXACT:
        return a.scaled(Fraction(1) / pivot)
    return a.scaled(1 / pivot)


def exact_best_constant_p1(form: InequalityForm):
    """Sharp constant of a p = 1 form over the whole decreasing cone.

    Returns ``(Cstar, kstar)``: the extreme value of the ratio over the step
    sequences with a nonzero RHS, and the smallest index attaining it.  Exact
    when the weights are exact.
    """
    if form.p != 1:
        raise BadExponentError(f"the extreme-ray argument needs p = 1, got {form.p}")
    length = form.m
    best = None
    best_k = None
    minimize = _minimizing(form)
    for k in range(1, length + 1):
        result = eval_form(form, step_sequence(k, length))
        if result.rhs0 == 0:
            continue
        ratio = result.ratio
        if _is_better(ratio, best, minimize):
            best = ratio
            best_k = k
    if best is None:
        raise NoAdmissibleRayError("every step sequence has a vanishing RHS")
    return best, best_k


def grid_bruteforce(
    form: InequalityForm,
    grid_levels: int = 3,
    max_states: int = 2_000_000,
) -> SearchResult:
    """Exhaustive search over decreasing sequences on the grid {0, 1/g, ..., 1}.

    The independent oracle for heuristic validation at any p; only viable on
    small instances (the state count is C(m + g, g)).
    """
    if grid_levels < 1:
        raise PreconditionError("grid_levels must be >= 1")
    length = form.m
    states = math.comb(length + grid_levels, grid_levels)
    if states > max_states:
        raise SearchSpaceTooLargeError(
            f"{states} grid sequences exceed the budget of {max_states}"
        )
    grid_values = [Fraction(j, grid_levels) for j in range(grid_levels, -1, -1)]
    best = None
    best_seq = None
    evaluated = 0
    minimize = _minimizing(form)
    for combo in combinations_with_replacement(grid_values, length):
        if combo[0] == 0:
            continue  # the zero sequence constrains nothing
        seq = Sequence.exact(combo)
        result = eval_form(form, seq)
        evaluated += 1
        if result.rhs0 == 0:
            continue
        if _is_better(result.ratio, best, minimize):
            best = result.ratio
            best_seq = seq
    if best is None:
        raise NoAdmissibleRayError("no grid sequence has a nonzero RHS")
    argext = _normalize_argext(form, best_seq)
    final = eval_form(form, argext)
    return SearchResult(
        best_ratio=final.ratio,
        argext=argext,
        method=METHOD_GRID,
        iterations=evaluated,
        converged=True,
    )


def _suffix_sums(increments: list) -> list:
    out = [0.0] * len(increments)
    acc = 0.0
    for i in range(len(increments) - 1, -1, -1):
        acc += increments[i]
        out[i] = acc
    return out


def search_best_constant(
    form: InequalityForm,
    budget: int = 40,
    restarts: int = 4,
    seed: int = 0,
) -> SearchResult:
    """Heuristic sharp-constant estimate by coordinate descent on increments.

    One budget unit is a full sweep: a probe of every pure step direction
    (collapsing the increment vector onto one coordinate) followed by
    multiplicative line probes on each coordinate.  ``budget = 0`` evaluates
    the start points only.  The returned ratio is achieved by the returned
    feasible sequence, so it upper-bounds the true infimum for GE forms and
    lower-bounds the true supremum for LE forms.
    """
    if budget < 0 or restarts < 1:
        raise PreconditionError("need budget >= 0 and restarts >= 1")
    length = form.m
    fast = FormEvaluator(form)
    minimize = _minimizing(form)
    rng = random.Random(seed)

    def objective(incr: list) -> float:
        lhs, rhs0 = fast.evaluate(_suffix_sums(incr))
        if rhs0 <= 0.0:
            return math.inf if minimize else -math.inf
        return lhs / rhs0

    def start_point(r: int) -> list:
        if r == 0:
            d = [0.0] * length
            d[length - 1] = 1.0  # the all-ones sequence
            return d
        if r % 2 == 1:
            return [rng.random() for _ in range(length)]
        return [rng.random() if rng.random() < 0.3 else 0.0 for _ in range(length)]

    best_val = None
    best_incr = None
    total_sweeps = 0
    converged = False
    scales = (0.0, 0.25, 0.5, 2.0, 4.0)
    for r in range(restarts):
        incr = start_point(r)
        val = objective(incr)
        if math.isinf(val):
            incr[length - 1] = max(incr[length - 1], 1.0)
            val = objective(incr)
        for _ in range(budget):
            total_sweeps += 1
            improved = False
            # Step-direction probes: pure rays are the candidate extreme points.
            for k in range(length):
                ray = [0.0] * length
                ray[k] = 1.0
                rv = objective(ray)
                if not math.isinf(rv) and _is_better(rv, val, minimize) and abs(rv - val) > 1e-15 * max(1.0, abs(val)):
                    val, incr, improved = rv, ray, True
            # Multiplicative coordinate probes.
            base = max(incr) or 1.0
            for k in range(length):
                cur = incr[k]
                candidates = [cur * s for s in scales]
                if cur == 0.0:
                    candidates.append(0.1 * base)
                for cand in candidates:
                    if cand == cur:
                        continue
                    trial = list(incr)
                    trial[k] = cand
                    tv = objective(trial)
                    if not math.isinf(tv) and _is_better(tv, val, minimize) and abs(tv - val) > 1e-15 * max(1.0, abs(val)):
                        val, incr, improved = tv, trial, True
            if not improved:
                converged = True
                break
        if not math.isinf(val) and _is_better(val, best_val, minimize):
            best_val = val
            best_incr = incr
    if best_incr is None:
        raise NoAdmissibleRayError("no feasible start produced a nonzero RHS")

    suffix = _suffix_sums(best_incr)
    scale = max(suffix) or 1.0
    argext = Sequence.exact(
        Fraction(round((v / scale) * 10**12), 10**12) for v in suffix
    )
    argext = _normalize_argext(form, argext)
    final = eval_form(form, argext)
    if final.rhs0 == 0:
        raise NoAdmissibleRayError("search collapsed onto a vacuous sequence")
    return SearchResult(
        best_ratio=final.ratio,
        argext=argext,
        method=METHOD_DESCENT,
        iterations=total_sweeps,
        converged=converged,
    )


_SWEEP_HEADER = ("n", "m", "p", "alpha", "lambda_exp", "empirical_C", "method", "exact")


@dataclass
class SweepResult:
    """Per-window constant estimates plus any skipped rows."""

    rows: list
    skipped: list

    def to_csv(self) -> str:
        lines = [",".join(_SWEEP_HEADER)]
        for row in self.rows:
            lines.append(
                ",".join(
                    [
                        str(row["n"]),
                        str(row["m"]),
                        decimal_string(row["p"]),
                        "" if row["alpha"] is None else decimal_string(row["alpha"]),
                        "" if row["lambda_exp"] is None else decimal_string(row["lambda_exp"]),
                        decimal_string(row["empirical_C"]),
                        row["method"],
                        str(row["exact"]).lower(),
                    ]
                )
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        rows = []
        for row in self.rows:
            rows.append(
                {
                    "n": row["n"],
                    "m": row["m"],
                    "p": format_number(row["p"]),
                    "alpha": None if row["alpha"] is None else format_number(row["alpha"]),
                    "lambda_exp": None if row["lambda_exp"] is None else format_number(row["lambda_exp"]),
                    "empirical_C": format_number(row["empirical_C"]),
                    "method": row["method"],
                    "exact": row["exact"],
                }
            )
        return {"rows": rows, "skipped": self.skipped}


def _resolve_fixed_sequence(a_spec: str, length: int, seed: int) -> Sequence:
    if a_spec == "ones":
        return ones(length)
    if a_spec == "harmonic":
        return harmonic_sequence(length)
    if a_spec.startswith("step:"):
        return step_sequence(int(a_spec.split(":")[1]), length)
    if a_spec.startswith("random"):
        parts = a_spec.split(":")
        dist = parts[1] if len(parts) > 1 else "uniform"
        return random_decreasing(length, seed, dist)
    raise InputFormatError(f"unknown sequence spec {a_spec!r} for sweeps")


def sweep(
    family: str,
    n_values: list,
    m_multiplier: int = 1,
    *,
    p,
    alpha=None,
    lambda_exp=None,
    outer_weight=None,
    inner_weight=None,
    a_spec: str | None = None,
    method: str = "auto",
    seed: int = 0,
    budget: int = 40,
    restarts: int = 4,
    grid_levels: int = 3,
) -> SweepResult:
    """Constant estimates across a family of windows m = multiplier * n.

    For the full-range families (C5_*) the swept value is the upper limit
    itself and the lower index stays 1.  With ``a_spec`` given, each row
    reports the ratio of that fixed sequence instead of an extremal search
    (exact in exact mode).  Rows whose window violates the family's
    precondition are skipped and flagged.
    """
    if m_multiplier < 1:
        raise PreconditionError("m_multiplier must be >= 1")
    rows = []
    skipped = []
    p = as_fraction(p)
    if family.startswith("T2"):
        # Explicit-weight family: default to unit weights, materialized per row.
        outer_weight = outer_weight if outer_weight is not None else PowerWeight(Fraction(0))
        inner_weight = inner_weight if inner_weight is not None else PowerWeight(Fraction(0))
    for n in n_values:
        full_range = family.startswith("C5")
        form_n = 1 if full_range else n
        form_m = m_multiplier * n
        try:
            form = make_named_form(
                family,
                p=p,
                n=form_n,
                m=form_m,
                alpha=alpha,
                lambda_exp=lambda_exp,
                outer_weight=outer_weight,
                inner_weight=inner_weight,
            )
        except PreconditionError as exc:
            skipped.append({"n": n, "m": form_m, "reason": str(exc)})
            continue
        if a_spec is not None:
            a = _resolve_fixed_sequence(a_spec, form_m, seed)
            result = eval_form(form, a)
            if result.ratio is None or result.ratio == math.inf:
                skipped.append({"n": n, "m": form_m, "reason": "degenerate ratio for fixed sequence"})
                continue
            value, used, exact = result.ratio, METHOD_FIXED, result.exact
        elif method == "exact" or (method == "auto" and p == 1):
            value, _ = exact_best_constant_p1(form)
            used = METHOD_EXACT_P1
            exact = isinstance(value, Fraction)
        elif method == "grid":
            res = grid_bruteforce(form, grid_levels=grid_levels)
            value, used, exact = res.best_ratio, res.method, isinstance(res.best_ratio, Fraction)
        else:
            res = search_best_constant(form, budget=budget, restarts=restarts, seed=seed)
            value, used, exact = res.best_ratio, res.method, False
        rows.append(
            {
                "n": n,
                "m": form_m,
                "p": p,
                "alpha": form.alpha,
                "lambda_exp": form.lambda_exp,
                "empirical_C": value,
                "method": used,
                "exact": exact,
            }
        )
    return SweepResult(rows=rows, skipped=skipped)
