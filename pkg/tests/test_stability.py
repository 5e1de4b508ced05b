import hashlib
import json
import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fusionaf import INCONCLUSIVE, Z_STABLE, analyze, d_stability_note, decide_simplicity, telescope
from fusionaf.module import ModuleData
from fusionaf.registry import ACTIONS, action_by_name
from fusionaf.stability import NOT_AF_EMBEDDABLE, Options, parse_d

STABLE = {"trivial_regular", "fib_regular", "ising_regular_1sigma", "z2_fiber_1chi", "z3_fiber_1chi"} | {
    f"z{n}_regular_1g" for n in range(2, 6)
}


def verify_certificate(cert: dict) -> bool:
    """Standalone check of an emitted certificate: digest, generator exponent, positivity."""
    N = cert["fusion_matrix"]
    text = json.dumps(N, sort_keys=True, separators=(",", ":"))
    if hashlib.sha256(text.encode()).hexdigest()[:16] != cert["matrix_digest"]:
        return False
    k = len(N)

    def mul(A, B):
        return [[sum(A[i][t] * B[t][j] for t in range(k)) for j in range(k)] for i in range(k)]

    powers = [[[int(i == j) for j in range(k)] for i in range(k)]]
    for _ in range(max(cert["strong_generator_n"], cert["positivity_exponent"])):
        powers.append(mul(powers[-1], N))
    n, p, u = cert["strong_generator_n"], cert["positivity_exponent"], cert["unit"]
    column = [powers[n][i][u] for i in range(k)]
    if not all(column) or (n > 1 and all(powers[n - 1][i][u] for i in range(k))):
        return False
    return all(x > 0 for row in powers[p] for x in row)


@pytest.mark.parametrize("name", sorted(ACTIONS))
def test_verdicts_on_the_registry(name):
    report = analyze(action_by_name(name))
    assert report.valid
    assert report.verdict == (Z_STABLE if name in STABLE else INCONCLUSIVE)
    if report.z_stable:
        assert verify_certificate(report.certificate)
        # the emitted matrix is the fusion matrix of Y, recomputed by expansion
        action = action_by_name(name)
        N = report.certificate["fusion_matrix"]
        for b in range(action.dual_ring.rank):
            col = oracles.multiply(action.dual_ring, oracles.Counter(dict(enumerate(action.Y))), oracles.Counter({b: 1}))
            assert [N[c][b] for c in range(action.dual_ring.rank)] == [col.get(c, 0) for c in range(action.dual_ring.rank)]


def test_analyze_examples():
    fib = analyze(action_by_name("fib_regular"))
    assert fib.certificate["strong_generator_n"] == 2 and fib.certificate["positivity_exponent"] == 2
    z2 = analyze(action_by_name("z2_regular_g"))
    assert z2.verdict == INCONCLUSIVE and "period-2" in z2.reason
    z2b = analyze(action_by_name("z2_regular_1g"))
    assert z2b.certificate["strong_generator_n"] == 1 and z2b.certificate["positivity_exponent"] == 1


def test_inconclusive_never_claims_instability():
    report = analyze(action_by_name("ising_regular_sigma"))
    assert report.verdict == INCONCLUSIVE
    text = report.to_markdown().lower()
    assert "not evidence against" in text
    assert "not z-stable" not in text


def test_invalid_input_is_inconclusive_not_a_crash():
    action = action_by_name("z2_regular_1g")
    L = (action.module.L[0], action.module.L[0])
    bad = replace(action, module=ModuleData(action.objects, L))
    report = analyze(bad)
    assert not report.valid and report.verdict == INCONCLUSIVE
    assert report.action_violations


def test_d_notes():
    one_g = analyze(action_by_name("z2_regular_1g"))
    note = d_stability_note(one_g, "M_{2^inf}").notes[-1]
    assert note.certified
    fib = analyze(action_by_name("fib_regular"))
    assert not d_stability_note(fib, "M_{2^inf}").notes[-1].certified
    assert d_stability_note(fib, "Z").notes[-1].certified
    assert not d_stability_note(analyze(action_by_name("z2_regular_g")), "Z").notes[-1].certified
    note = d_stability_note(fib, "O_2").notes[-1]
    assert not note.certified and note.reason == NOT_AF_EMBEDDABLE
    with pytest.raises(ValueError):
        d_stability_note(fib, "Cuntz")


def test_uhf_divisibility_oracle():
    # z2_regular_1g: c(n) = 2^(n-1) (1, 1), so every 2-power divides a cofinal set of levels
    action = action_by_name("z2_regular_1g")
    for n in range(1, 10):
        assert oracles.tensor_power(action.dual_ring, action.Y, n) == [2 ** (n - 1)] * 2
    # Fibonacci: gcd of the block sizes is 1 at every level
    fib = action_by_name("fib_regular")
    for n in range(2, 12):
        c = oracles.tensor_power(fib.dual_ring, fib.Y, n)
        assert any(x % 2 for x in c)


def test_parse_d():
    assert parse_d("Z") == ("Z", None)
    assert parse_d("M_{3^inf}") == ("UHF", 3)
    assert parse_d("UHF(5)") == ("UHF", 5)
    with pytest.raises(ValueError):
        parse_d("M_{1^inf}")


def _random_perm(rng, k):
    p = list(range(k))
    rng.shuffle(p)
    return p


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(ACTIONS)), st.integers(0, 10**6))
def test_relabeling_keeps_the_verdict(name, seed):
    action = action_by_name(name)
    rng = random.Random(seed)
    moved = action.relabeled(
        _random_perm(rng, action.ring.rank), _random_perm(rng, action.module.rank), _random_perm(rng, action.dual_ring.rank)
    )
    a = analyze(action, options=Options(max_m=1))
    b = analyze(moved, options=Options(max_m=1))
    assert b.valid
    assert a.verdict == b.verdict
    if a.z_stable:
        assert a.certificate["strong_generator_n"] == b.certificate["strong_generator_n"]
        assert a.certificate["positivity_exponent"] == b.certificate["positivity_exponent"]


@pytest.mark.parametrize("name", sorted(STABLE))
def test_larger_horizons_keep_the_verdict(name):
    action = action_by_name(name)
    base = analyze(action, horizon=4, options=Options(max_m=1))
    for h in (6, 10, 14):
        assert analyze(action, horizon=h, options=Options(max_m=1)).verdict == base.verdict == Z_STABLE


@pytest.mark.parametrize("name", sorted(ACTIONS))
@pytest.mark.parametrize("step", [2, 3])
def test_telescoping_keeps_simplicity(name, step):
    report = analyze(action_by_name(name), options=Options(max_m=0))
    t = decide_simplicity(telescope(report.by_diagram, step))
    assert t.simple == report.by_simplicity.simple
    if report.z_stable:
        assert t.certificate == "positive-power"


def test_reports_are_deterministic():
    action = action_by_name("ising_regular_1sigma")
    a, b = analyze(action, name="x"), analyze(action, name="x")
    assert a.to_json() == b.to_json()
    assert a.to_markdown() == b.to_markdown()
    keys = list(json.loads(a.to_json()))
    assert keys == sorted(keys)


def test_markdown_mentions_the_generator():
    text = analyze(action_by_name("fib_regular")).to_markdown()
    assert "strong tensor generator: n = 2" in text


def test_capacity_table_is_filled():
    report = analyze(action_by_name("fib_regular"))
    assert [e["m"] for e in report.capacity] == [0, 1, 2, 3, 4]
    assert all(e["n"] is not None for e in report.capacity)
