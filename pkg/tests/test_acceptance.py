"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL] criterion N`` line (run with
``-s`` or look at the captured output) before asserting.
"""

from __future__ import annotations

import os
import random
import subprocess
import sys
import time
from dataclasses import replace
from fractions import Fraction

import oracles
from fusionaf import (
    INCONCLUSIVE,
    Z_STABLE,
    BratteliDiagram,
    ModuleData,
    MultiMatrixInclusion,
    MultiMatrixShape,
    StructureError,
    analyze,
    brute_force_commutant,
    by_shape,
    central_capacity,
    d_stability_note,
    decide_simplicity,
    fp_dimension,
    inclusion_between_levels,
    power_decomposition_defect,
    relative_commutant_shape,
    verify_action,
    verify_ring,
)
from fusionaf.document import emit
from fusionaf.registry import ACTIONS, RINGS, action_by_name, registry_document


def verdict_line(capsys, n: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}")


def test_criterion_1_fibonacci_regular(capsys):
    action = action_by_name("fib_regular")
    report = analyze(action)
    cert = report.certificate
    dims = list(report.a_diagram.algebra_dims[:6])
    # oracle: expand tau^n in the ring itself; regular module so m0 <| tau^n = tau^n
    expanded = [sum(x * x for x in oracles.tensor_power(action.ring, action.ring.object({"tau": 1}), n)) for n in range(6)]
    ok = (
        report.verdict == Z_STABLE
        and cert.get("strong_generator_n") == 2
        and cert.get("positivity_exponent") == 2
        and dims == expanded == [1, 1, 2, 5, 13, 34]
    )
    verdict_line(capsys, 1, ok, f"verdict={report.verdict} n={cert.get('strong_generator_n')} "
                 f"p={cert.get('positivity_exponent')} dims={dims} oracle={expanded}")
    assert ok


def test_criterion_2_power_decomposition(capsys):
    checked, failures = 0, []
    for name in ACTIONS:
        action = action_by_name(name)
        for m in range(1, 9):
            checked += 1
            defect = power_decomposition_defect(action, m)
            # second route: c(m) by direct expansion, R_Y^m column by column from R matrices
            c = oracles.tensor_power(action.dual_ring, action.Y, m)
            k = action.module.rank
            for v in range(k):
                col = [int(i == v) for i in range(k)]
                for _ in range(m):
                    col = oracles.act_right(action, col, action.Y)
                rhs = [sum(c[s] * action.R[s][w][v] for s in range(len(c))) for w in range(k)]
                if col != rhs:
                    defect.append(("oracle", v))
            if defect:
                failures.append((name, m, defect[:3]))
    ok = not failures
    verdict_line(capsys, 2, ok, f"{checked} (action, m) pairs, {len(failures)} with defects {failures[:3]}")
    assert ok


def _random_inclusion(rng: random.Random) -> MultiMatrixInclusion:
    while True:
        p = [rng.randint(1, 6) for _ in range(rng.randint(1, 4))]
        rows = []
        for _ in range(rng.randint(1, 4)):
            row = [rng.choice((0, 0, 1, 1, 2, 3)) for _ in p]
            if any(row):
                rows.append(row)
        if not rows or any(not any(r[i] for r in rows) for i in range(len(p))):
            continue
        q = [sum(x * s for x, s in zip(r, p)) for r in rows]
        if sum(s * s for s in q) > 2000:
            continue
        return MultiMatrixInclusion(MultiMatrixShape.from_sizes(p), MultiMatrixShape.from_sizes(q), tuple(map(tuple, rows)))


def test_criterion_3_relative_commutant(capsys):
    start = time.perf_counter()
    rng = random.Random(20240611)
    mismatches = []
    for _ in range(100):
        inc = _random_inclusion(rng)
        if relative_commutant_shape(inc).dimension != brute_force_commutant(inc):
            mismatches.append(inc)
    registry_checked = registry_skipped = 0
    for name in ACTIONS:
        action = action_by_name(name)
        for n in range(7):
            for m in range(7 - n):
                inc = inclusion_between_levels(action, n, m)
                if inc.target.dimension > 2000:
                    registry_skipped += 1
                    continue
                registry_checked += 1
                if relative_commutant_shape(inc).dimension != brute_force_commutant(inc):
                    mismatches.append((name, n, m))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 5.0
    verdict_line(
        capsys, 3, ok,
        f"100 random + {registry_checked} registry inclusions, {len(mismatches)} mismatches, "
        f"{registry_skipped} registry inclusions above the oracle bound not run, {elapsed:.2f}s",
    )
    assert ok


def _simplicity_family():
    for k in (1, 2):
        for entries in oracles.product(range(3), repeat=k * k):
            A = tuple(tuple(entries[i * k:(i + 1) * k]) for i in range(k))
            for support in range(1, 1 << k):
                yield A, tuple(support >> v & 1 for v in range(k))
    for A in oracles.boolean_patterns(3):
        doubled = tuple(tuple(2 * x if i == j else x for j, x in enumerate(r)) for i, r in enumerate(A))
        for support in range(1, 8):
            init = tuple(support >> v & 1 for v in range(3))
            yield A, init
            if doubled != A:
                yield doubled, init
    for A in oracles.orbit_representatives(4, fixed=0):
        yield A, (1, 0, 0, 0)
    for A in oracles.orbit_representatives(4):
        yield A, (1, 1, 1, 1)
        yield tuple(tuple(2 * x for x in r) for r in A), (1, 1, 1, 1)


def test_criterion_4_simplicity_decision(capsys):
    cases, mismatches = 0, []
    for A, init in _simplicity_family():
        cases += 1
        expected = oracles.brute_simple(A, init)
        diagram = BratteliDiagram.from_matrix(A, init, horizon=6)
        try:
            verdict = decide_simplicity(diagram)
        except ValueError:
            if expected is not None:
                mismatches.append((A, init, "refused"))
            continue
        if expected is None or verdict.simple != expected:
            mismatches.append((A, init, verdict.simple))
        elif not verdict.simple:
            problems = oracles.check_ideal_witness(A, init, verdict.witness, verdict.witness_period)
            if problems:
                mismatches.append((A, init, problems))
    ok = not mismatches and cases >= 2000
    verdict_line(capsys, 4, ok, f"{cases} stationary diagrams, {len(mismatches)} mismatches {mismatches[:2]}")
    assert ok


def test_criterion_5_pf_enclosure(capsys):
    enc = fp_dimension([[0, 1], [1, 1]], tolerance=1e-10)
    lo, hi = oracles.bisect_root([1, -1, -1], Fraction(1), Fraction(2), Fraction(1, 10**30))
    ok = enc.lower <= lo and hi <= enc.upper and enc.width <= Fraction(1, 10**10)
    verdict_line(capsys, 5, ok, f"[{float(enc.lower):.13f}, {float(enc.upper):.13f}] width {float(enc.width):.2e}, "
                 f"bisection root {float(lo):.15f}")
    assert ok


def test_criterion_6_z2_regular(capsys):
    g = analyze(action_by_name("z2_regular_g"))
    one_g = analyze(action_by_name("z2_regular_1g"))
    noted = d_stability_note(one_g, "M_{2^inf}").notes[-1]
    # divisibility oracle: c(n) = 2^(n-1) (1, 1), so M_{2^(n-1)} sits unitally in each level
    action = action_by_name("z2_regular_1g")
    ring, Y = action.dual_ring, action.Y
    pattern = all(oracles.tensor_power(ring, Y, n) == [2 ** (n - 1)] * 2 for n in range(1, 9))
    ok = (
        g.verdict == INCONCLUSIVE
        and g.generator.period == 2
        and not g.generator.found
        and one_g.verdict == Z_STABLE
        and one_g.certificate["strong_generator_n"] == 1
        and noted.certified
        and pattern
    )
    verdict_line(capsys, 6, ok, f"Y=g: {g.verdict} (period {g.generator.period}); Y=1+g: {one_g.verdict} "
                 f"n={one_g.certificate.get('strong_generator_n')}; M_2^inf certified={noted.certified}")
    assert ok


def test_criterion_7_central_capacity(capsys):
    missing, invalid, found = [], [], 0
    for name in ACTIONS:
        action = action_by_name(name)
        for m in range(5):
            for n in range(9):
                wit = central_capacity(action, m, n)
                if wit is not None:
                    break
            else:
                missing.append((name, m))
                continue
            found += 1
            inc = inclusion_between_levels(action, n, m)
            source, idx = by_shape(action, m)
            c = oracles.tensor_power(action.dual_ring, action.Y, m)
            lam = [inc.multiplicity[j][i] for i in range(len(inc.source.sizes)) for j in range(len(inc.target.sizes))
                   if inc.multiplicity[j][i] > 0]
            S = wit.assignment
            sums = [sum(S[b][t] * c[s] for t, s in enumerate(idx)) for b in range(len(S))]
            hit = all(any(row[t] for row in S) for t in range(len(idx)))
            if sums != lam or not hit or any(x < 0 for row in S for x in row):
                invalid.append((name, m, n))
    ok = not missing and not invalid
    verdict_line(capsys, 7, ok, f"{found} witnesses, missing {missing}, failing re-validation {invalid}")
    assert ok


def _ring_mutants():
    for name, build in RINGS.items():
        ring = build()
        k = ring.rank
        for a in range(k):
            for b in range(k):
                for c in range(k):
                    v = ring.N(a, b, c)
                    for new in (v + 1, v - 1):
                        if new >= 0:
                            yield name, ring, (a, b, c), new


def _associative_and_rigid(ring) -> bool:
    """Independent check of the two laws that matter for the escaping mutants."""
    k = ring.rank
    for a in range(k):
        for b in range(k):
            for c in range(k):
                left = oracles.multiply(ring, oracles.multiply(ring, oracles.Counter({a: 1}), oracles.Counter({b: 1})),
                                        oracles.Counter({c: 1}))
                right = oracles.multiply(ring, oracles.Counter({a: 1}),
                                         oracles.multiply(ring, oracles.Counter({b: 1}), oracles.Counter({c: 1})))
                if left != right:
                    return False
            if ring.N(a, b, ring.unit) != int(b == ring.dual[a]):
                return False
    return True


def _action_mutants(action):
    k = action.module.rank
    for side, mats in (("L", action.module.L), ("R", action.R)):
        for i, M in enumerate(mats):
            for x in range(k):
                for y in range(k):
                    for d in (1, -1):
                        if M[x][y] + d < 0:
                            continue
                        rows = [list(r) for r in M]
                        rows[x][y] += d
                        new = mats[:i] + (tuple(map(tuple, rows)),) + mats[i + 1:]
                        yield side, i, x, y, d, new


def test_criterion_8_mutation_detection(capsys):
    ring_total, escaped = 0, []
    for name, ring, (a, b, c), new in _ring_mutants():
        ring_total += 1
        try:
            mutant = ring.with_constant(a, b, c, new)
        except StructureError:
            continue
        if not verify_ring(mutant):
            escaped.append((name, ring.labels[a], ring.labels[b], ring.labels[c], new, _associative_and_rigid(mutant)))

    action_total, action_escaped = 0, []
    for name in ACTIONS:
        action = action_by_name(name)
        for side, i, x, y, d, new in _action_mutants(action):
            action_total += 1
            try:
                mutant = replace(action, module=ModuleData(action.objects, new)) if side == "L" else replace(action, R=new)
            except StructureError:
                continue
            if verify_action(mutant):
                continue
            if any(power_decomposition_defect(mutant, m) for m in range(1, 9)):
                continue
            action_escaped.append((name, side, i, x, y, d))

    ok = not escaped and not action_escaped
    detail = (
        f"ring mutants {ring_total - len(escaped)}/{ring_total} detected, action mutants "
        f"{action_total - len(action_escaped)}/{action_total} detected"
    )
    if escaped:
        detail += "; undetected ring mutants (each is again a valid fusion ring per the independent check): " + ", ".join(
            f"{n}:N({a},{b})^{c}->{v} valid={valid}" for n, a, b, c, v, valid in escaped
        )
    verdict_line(capsys, 8, ok, detail)
    assert not action_escaped
    assert not escaped, "single-constant mutants that are themselves fusion rings cannot be flagged by an axiom checker"


def _run_cli(*args, env=None):
    return subprocess.run(
        [sys.executable, "-m", "fusionaf", *args],
        capture_output=True,
        env={**os.environ, **(env or {})},
    )


def test_criterion_9_cli_determinism(capsys, tmp_path):
    fib = tmp_path / "fib_regular.json"
    fib.write_text(emit(registry_document("fib_regular")))
    z2 = tmp_path / "z2_regular_g.json"
    z2.write_text(emit(registry_document("z2_regular_g")))
    bad = tmp_path / "bad.json"
    bad.write_text(fib.read_text().replace('"mult": 1', '"mult": -1', 1))

    outputs = []
    for run in range(2):
        md, js = tmp_path / f"r{run}.md", tmp_path / f"r{run}.json"
        proc = _run_cli("analyze", str(fib), "--report", str(md), "--json", str(js))
        outputs.append((proc.stdout, md.read_bytes(), js.read_bytes(), proc.returncode))
    same = outputs[0] == outputs[1]

    codes = {
        "fib": outputs[0][3],
        "z2_g": _run_cli("analyze", str(z2)).returncode,
        "invalid": _run_cli("analyze", str(bad)).returncode,
        "missing file": _run_cli("analyze", str(tmp_path / "nope.json")).returncode,
        "bad flag": _run_cli("analyze", str(fib), "--horizon", "x").returncode,
    }
    expected = {"fib": 0, "z2_g": 10, "invalid": 1, "missing file": 2, "bad flag": 2}
    ok = same and codes == expected
    verdict_line(capsys, 9, ok, f"byte-identical={same}, exit codes {codes}")
    assert ok
