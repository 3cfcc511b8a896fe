"""
Theorem suite and sweep harness.

run_theorem_suite builds one long prefix of u_beta, indexes it once
(suffix automaton counts, eertree), and checks every closed form and
structural property against the empirical data up to the trusted horizon.
Each check yields a Verdict; a failed check carries its first
counterexample and never raises.
"""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from parry_words.branches import (
    branch_central_factor,
    branch_spec,
    check_absent_branches,
    mechanical_word,
    parity_table,
    psi_substitution,
    verify_psi,
)
from parry_words.complexity import (
    agreement_horizon,
    closed_form_delta2_c,
    closed_form_delta_c,
    factor_counts,
    reversal_closure,
    special_factors,
)
from parry_words.config_loader import (
    DEFAULT_N_MAX,
    DEFAULT_PREFIX_LADDER_FACTOR,
    DEFAULT_PREFIX_LADDER_INDEX,
    DEFAULT_PREFIX_MAX,
    DEFAULT_PREFIX_MIN,
    SWEEP_M_MAX,
    SWEEP_T_MAX,
    VERIFICATION,
    sweep_workers,
)
from parry_words.eertree import build_eertree
from parry_words.palindromes import (
    PrefixLanguage,
    center_of,
    center_transport,
    classify_all_palindromes,
    closed_form_p,
    defect_series,
    expected_zero_blocks,
    format_center,
    lift_palindrome,
    palindrome_counts,
    v_centers,
    zero_block_factors,
)
from parry_words.parry import (
    Classification,
    ConfluentParams,
    RenyiDigits,
    canonical_substitution,
    check_parry,
    classify,
    confluent_sweep,
    dominant_root,
    renyi_digits,
    uv_length_table,
    uv_lengths,
)
from parry_words.report import AnalysisReport, Verdict
from parry_words.words import Morphism, Word, apply, fixed_point_prefix, format_word, is_primitive, zeros

logger = logging.getLogger("parry-words")

# non-confluent digit strings run alongside the confluent sweep
NON_CONFLUENT_CONTROLS: Tuple[Tuple[int, ...], ...] = ((3, 1, 1), (4, 2, 3))


def default_prefix_length(cls: Classification) -> int:
    """max(min_length, factor * |U^(index)|), capped at max_length."""
    length = DEFAULT_PREFIX_MIN
    if cls.params is not None:
        u = uv_lengths(cls.params, DEFAULT_PREFIX_LADDER_INDEX)[1]
        length = max(length, DEFAULT_PREFIX_LADDER_FACTOR * u)
    return min(length, DEFAULT_PREFIX_MAX)


class _Stopwatch:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.timings: Dict[str, float] = {}

    @contextmanager
    def stage(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            if self.enabled:
                self.timings[name] = round(time.perf_counter() - start, 4)


def _guarded(name: str, check: Callable[[], Verdict]) -> Verdict:
    try:
        return check()
    except (ValueError, ArithmeticError) as e:
        logger.error(f"Check {name} could not run: {e}")
        return Verdict(name, False, 0, {"error": str(e)})


def _series_verdict(name: str, got: Sequence[int], expected: Sequence[int], offset: int = 0) -> Verdict:
    got = np.asarray(got, dtype=np.int64)
    expected = np.asarray(expected, dtype=np.int64)
    size = min(len(got), len(expected))
    bad = np.flatnonzero(got[:size] != expected[:size])
    if bad.size:
        i = int(bad[0])
        return Verdict(name, False, size, {"n": i + offset, "empirical": int(got[i]), "closed_form": int(expected[i])})
    return Verdict(name, True, size)


# ----------------------
# INDIVIDUAL CHECKS
# ----------------------

def _check_round_trip(d: RenyiDigits) -> Verdict:
    expansion = renyi_digits(dominant_root(d), d.m + 1)
    if expansion.digits == d.digits and expansion.status == "finite":
        return Verdict("parry_round_trip", True, d.m)
    return Verdict(
        "parry_round_trip",
        False,
        d.m,
        {"digits": list(expansion.digits), "status": expansion.status},
    )


def _check_primitivity(phi: Morphism) -> Verdict:
    return Verdict("primitivity", is_primitive(phi), 1)


def _check_ladders(p: ConfluentParams, phi: Morphism) -> List[Verdict]:
    """Ladder word lengths against the numeration basis, and centers of V^(k)."""
    limit = VERIFICATION["uv_length_limit"]
    tail = zeros(p.t)
    v, u = zeros(p.t), zeros(p.t + p.s - 1)
    lengths_checked, centers_checked = 0, 0
    lengths_bad, centers_bad = None, None
    k = 1
    while len(u) <= limit:
        expected = uv_lengths(p, k)
        lengths_checked += 1
        if lengths_bad is None and (len(v), len(u)) != expected:
            lengths_bad = {"k": k, "words": [len(v), len(u)], "formula": list(expected)}
        centers_checked += 1
        predicted = v_centers(p, k)
        actual = center_of(v)
        if centers_bad is None and actual != predicted:
            centers_bad = {"k": k, "center": format_center(actual), "predicted": format_center(predicted)}
        v, u = apply(phi, v) + tail, apply(phi, u) + tail
        k += 1
    return [
        Verdict("uv_word_lengths", lengths_bad is None, lengths_checked, lengths_bad),
        Verdict("v_centers", centers_bad is None, centers_checked, centers_bad),
    ]


def _check_classification(p: ConfluentParams, language: PrefixLanguage) -> Verdict:
    verdicts = classify_all_palindromes(language, p, VERIFICATION["classification_max_len"])
    bad = next((v for v in verdicts if not v.match), None)
    return Verdict("extension_classification", bad is None, len(verdicts), bad.to_dict() if bad else None)


def _check_lifting(p: ConfluentParams, phi: Morphism, language: PrefixLanguage, horizon: int) -> Verdict:
    """phi(q) 0^t is a palindromic factor with as many extensions as q.

    The count is compared for non-empty q only: the empty word has the single
    extension 00 while its lift 0^t = V^(1) has two when s >= 2.
    """
    tree = language.tree
    checked = 0
    for q in language.palindromes(VERIFICATION["lifting_max_len"]):
        lifted = lift_palindrome(phi, q, p.t)
        node = tree.find(lifted)
        checked += 1
        if node < 0:
            return Verdict("palindrome_lifting", False, checked, {"palindrome": format_word(q), "lifted": format_word(lifted)})
        if q and len(lifted) + 2 <= horizon:
            before, after = tree.extensions(tree.find(q)), tree.extensions(node)
            if len(before) != len(after):
                return Verdict(
                    "palindrome_lifting",
                    False,
                    checked,
                    {"palindrome": format_word(q), "extensions": len(before), "lifted_extensions": len(after)},
                )
    return Verdict("palindrome_lifting", True, checked)


def _check_center_transport(p: ConfluentParams, phi: Morphism, language: PrefixLanguage) -> Verdict:
    checked = 0
    for q in language.palindromes(VERIFICATION["center_check_len"]):
        predicted = center_transport(p, center_of(q))
        actual = center_of(lift_palindrome(phi, q, p.t))
        checked += 1
        if actual != predicted:
            return Verdict(
                "center_transport",
                False,
                checked,
                {"palindrome": format_word(q), "center": format_center(actual), "predicted": format_center(predicted)},
            )
    return Verdict("center_transport", True, checked)


def _check_zero_blocks(p: ConfluentParams, prefix: Word) -> Verdict:
    observed, expected = zero_block_factors(prefix), expected_zero_blocks(p)
    if observed == expected:
        return Verdict("zero_blocks", True, len(observed))
    return Verdict(
        "zero_blocks",
        False,
        len(observed),
        {"unexpected": sorted(observed - expected), "missing": sorted(expected - observed)},
    )


def _check_reversal(prefix: Word, confluent: bool) -> Verdict:
    witness = reversal_closure(prefix, VERIFICATION["reversal_check_len"])
    if (witness is None) == confluent:
        return Verdict("reversal_closure", True, VERIFICATION["reversal_check_len"])
    detail = {"factor": format_word(witness)} if witness is not None else {"closed": True}
    return Verdict("reversal_closure", False, VERIFICATION["reversal_check_len"], detail)


def _check_special_factors(prefix: Word, delta: np.ndarray) -> Verdict:
    """Sum of (#Lext - 1) over left special factors equals dC(n)."""
    limit = min(VERIFICATION["special_factor_len"], len(delta))
    for n in range(limit):
        excess = special_factors(prefix, n).left_excess()
        if excess != int(delta[n]):
            return Verdict("special_factor_sum", False, n + 1, {"n": n, "left_excess": excess, "delta_c": int(delta[n])})
    return Verdict("special_factor_sum", True, limit)


def _check_fullness(prefix: Word, tree) -> Verdict:
    series = defect_series(prefix, tree)
    if series.full:
        return Verdict("fullness", True, len(prefix))
    return Verdict("fullness", False, len(prefix), series.summary())


def _check_branch_factors(p: ConfluentParams, language: PrefixLanguage) -> Verdict:
    """Central factors of every existing branch: palindromic, centered, nested, and factors of u_beta."""
    size = VERIFICATION["branch_factor_length"]
    checked = 0
    for spec in parity_table(p):
        if not spec.exists:
            continue
        short = branch_central_factor(p, spec.center, size)
        long = branch_central_factor(p, spec.center, 2 * size)
        cut = (len(long) - len(short)) // 2
        checked += 1
        problem = None
        if center_of(long) != spec.center:
            problem = "center"
        elif long[cut:cut + len(short)] != short:
            problem = "nesting"
        elif long not in language:
            problem = "membership"
        if problem:
            return Verdict(
                "branch_factors",
                False,
                checked,
                {"center": format_center(spec.center), "problem": problem, "factor": format_word(long)},
            )
    return Verdict("branch_factors", True, checked)


def _check_absent(p: ConfluentParams, phi: Morphism) -> Verdict:
    if p.s % 2 == 1:
        return Verdict("branch_absence_bounds", True, 0)
    long_prefix = fixed_point_prefix(phi, 0, VERIFICATION["branch_prefix_length"])
    return check_absent_branches(p, PrefixLanguage(long_prefix, p.m))


def _check_psi(p: ConfluentParams) -> Verdict:
    verdict = verify_psi(p, VERIFICATION["psi_depth"])
    if verdict.passed and p.t % 2 == 0 and not psi_substitution(p).images_palindromic:
        return Verdict("psi_invariance", False, verdict.checked, {"images_palindromic": False})
    return verdict


def _check_mechanical(p: ConfluentParams, phi: Morphism) -> Verdict:
    size = VERIFICATION["mechanical_length"]
    mech = mechanical_word(p, size)
    u = fixed_point_prefix(phi, 0, size)
    if mech == u:
        return Verdict("mechanical_word", True, size)
    i = next(i for i, (a, b) in enumerate(zip(mech, u)) if a != b)
    return Verdict("mechanical_word", False, size, {"position": i, "mechanical": mech[i], "fixed_point": u[i]})


# ----------------------
# SUITE
# ----------------------

def run_theorem_suite(
    digits: Union[Sequence[int], RenyiDigits],
    prefix_len: Optional[int] = None,
    n_max: Optional[int] = None,
    timings: bool = False,
) -> AnalysisReport:
    d = digits if isinstance(digits, RenyiDigits) else check_parry(digits)
    cls = classify(d)
    params = cls.params
    phi = canonical_substitution(d)
    watch = _Stopwatch(timings)

    length = prefix_len if prefix_len is not None else default_prefix_length(cls)
    if length < 2:
        raise ValueError(f"Prefix length must be >= 2, got {length}")
    n_max = min(n_max if n_max is not None else DEFAULT_N_MAX, length - 1)

    with watch.stage("generate"):
        prefix = fixed_point_prefix(phi, 0, length)
    logger.info(f"Digits {d}: generated {length} letters")

    with watch.stage("index"):
        c_full, c_half = factor_counts(prefix, n_max, d.m)
        tree = build_eertree(prefix, d.m)
        p_full, p_half = palindrome_counts(tree, n_max)
    horizon = min(agreement_horizon(c_full, c_half), agreement_horizon(p_full, p_half))
    if horizon < n_max:
        logger.warning(f"Digits {d}: horizon {horizon} below n_max={n_max}")
    c, p = c_full[:horizon + 1], p_full[:horizon + 1]
    delta, delta2 = np.diff(c), np.diff(c, n=2)
    language = PrefixLanguage(prefix, d.m, horizon, tree)

    verdicts: List[Verdict] = [
        _guarded("primitivity", lambda: _check_primitivity(phi)),
        _guarded("parry_round_trip", lambda: _check_round_trip(d)),
    ]
    closed_forms: Dict = {}

    with watch.stage("verify"):
        if params is None:
            tail = np.arange(horizon // 2 + 1, horizon + 1)
            verdicts.append(_series_verdict("palindromes_vanish", p[tail], np.zeros(tail.size), offset=int(tail[0]) if tail.size else 0))
            verdicts.append(_guarded("reversal_closure", lambda: _check_reversal(prefix, False)))
        else:
            closed_p = [closed_form_p(params, n) for n in range(horizon + 1)]
            closed_dc = [closed_form_delta_c(params, n) for n in range(horizon)]
            closed_d2 = [closed_form_delta2_c(params, n) for n in range(max(horizon - 1, 0))]
            closed_forms = {
                "p": closed_p,
                "delta_c": closed_dc,
                "delta2_c": closed_d2,
                "uv_lengths": [list(row) for row in uv_length_table(params, horizon)],
                "psi": None,
            }
            m = params.m
            verdicts.append(_series_verdict("closed_form_p", p, closed_p))
            verdicts.append(_series_verdict("delta_c_closed_form", delta, closed_dc))
            verdicts.append(_series_verdict("delta2_c_closed_form", delta2, closed_d2))
            verdicts.append(_series_verdict("palindrome_sum_identity", p[1:] + p[:-1], delta + 2))
            if not params.is_arnoux_rauzy:
                verdicts.append(_series_verdict("p_second_difference", p[2:] - p[:-2], closed_d2))
            over = np.flatnonzero((delta > m) | (p[1:] + p[:-1] > m + 2))
            verdicts.append(Verdict(
                "complexity_bounds",
                over.size == 0,
                int(delta.size),
                {"n": int(over[0])} if over.size else None,
            ))
            verdicts.extend(_check_ladders(params, phi))
            verdicts.append(_guarded("extension_classification", lambda: _check_classification(params, language)))
            verdicts.append(_guarded("palindrome_lifting", lambda: _check_lifting(params, phi, language, horizon)))
            verdicts.append(_guarded("center_transport", lambda: _check_center_transport(params, phi, language)))
            verdicts.append(_guarded("zero_blocks", lambda: _check_zero_blocks(params, prefix)))
            verdicts.append(_guarded("reversal_closure", lambda: _check_reversal(prefix, True)))
            verdicts.append(_guarded("special_factor_sum", lambda: _check_special_factors(prefix, delta)))
            verdicts.append(_guarded("fullness", lambda: _check_fullness(prefix, tree)))
            verdicts.append(_guarded("branch_factors", lambda: _check_branch_factors(params, language)))
            verdicts.append(_guarded("branch_absence_bounds", lambda: _check_absent(params, phi)))
            if branch_spec(params, None).exists:
                closed_forms["psi"] = psi_substitution(params).to_dict()
                verdicts.append(_guarded("psi_invariance", lambda: _check_psi(params)))
            if params.m == 2 and params.is_arnoux_rauzy:
                verdicts.append(_guarded("mechanical_word", lambda: _check_mechanical(params, phi)))

    report = AnalysisReport(
        digits=d.digits,
        classification=cls.to_dict(),
        horizon=horizon,
        c=[int(x) for x in c],
        delta_c=[int(x) for x in delta],
        delta2_c=[int(x) for x in delta2],
        p=[int(x) for x in p],
        closed_forms=closed_forms,
        verdicts=verdicts,
        timings=watch.timings,
    )
    failed = [v.name for v in report.failures()]
    if failed:
        logger.error(f"Digits {d}: failed checks {', '.join(failed)}")
    else:
        logger.info(f"Digits {d}: all {len(verdicts)} checks passed (horizon {horizon})")
    return report


def sweep_cases(m_max: int = SWEEP_M_MAX, t_max: int = SWEEP_T_MAX, controls: bool = True) -> List[Tuple[int, ...]]:
    cases = [p.digits().digits for p in confluent_sweep(m_max, t_max)]
    if controls:
        cases.extend(NON_CONFLUENT_CONTROLS)
    return cases


def run_sweep(
    m_max: int = SWEEP_M_MAX,
    t_max: int = SWEEP_T_MAX,
    n_max: Optional[int] = None,
    workers: Optional[int] = None,
    prefix_len: Optional[int] = None,
    controls: bool = True,
    timings: bool = False,
) -> List[AnalysisReport]:
    """Theorem suite over every confluent case in range, in (m, t, s) order."""
    cases = sweep_cases(m_max, t_max, controls)
    workers = workers or sweep_workers()
    logger.info(f"Sweep over {len(cases)} digit strings with {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        reports = list(executor.map(lambda digits: run_theorem_suite(digits, prefix_len, n_max, timings), cases))
    passed = sum(r.passed for r in reports)
    logger.info(f"Sweep finished: {passed}/{len(reports)} cases passed")
    return reports
