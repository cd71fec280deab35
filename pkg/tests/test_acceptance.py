"""Acceptance criteria, each at its stated tolerance and time budget.

Every test records a one-line summary; conftest prints them after the run.
"""

import random
import time
from collections import Counter

import pytest

from helpers import mixed_model
from ipc1.formula import length, random_dag, random_formula, rn_formula, rn_formula_dag
from ipc1.kripke import (canonical, check_brute, check_fast, condensation, model_indices)
from ipc1.lattice import join, leq, meet, rn_index, rn_index_dag, rpc
from ipc1.reduction import (apath_table, construct, gen_slice_graph, mc_instance, state_in,
                            state_out)
from ipc1.rnindex import all_indices, phi, psi
from ipc1.superint import KC, allowed_indices, classes

pytestmark = pytest.mark.acceptance

STATED_KC_CLASSES = 7


def fib(n):
    a, b = 1, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def test_criterion_1_lattice_algebra(record_property):
    t0 = time.perf_counter()
    xs = all_indices(24)
    fails = Counter()
    for x in xs:
        if meet(x, x) != x or join(x, x) != x:
            fails["idempotence"] += 1
        for y in xs:
            if meet(x, y) != meet(y, x) or join(x, y) != join(y, x):
                fails["commutativity"] += 1
            if meet(x, join(x, y)) != x or join(x, meet(x, y)) != x:
                fails["absorption"] += 1
            if leq(x, y) != (join(x, y) == y):
                fails["order"] += 1
            r = rpc(x, y)
            for z in xs:
                if meet(x, meet(y, z)) != meet(meet(x, y), z):
                    fails["meet associativity"] += 1
                if join(x, join(y, z)) != join(join(x, y), z):
                    fails["join associativity"] += 1
                if meet(x, join(y, z)) != join(meet(x, y), meet(x, z)):
                    fails["distributivity"] += 1
                # z plays the candidate c
                if leq(meet(z, x), y) != leq(z, r):
                    fails["residuation"] += 1
    secs = time.perf_counter() - t0
    n = len(xs)
    record_property("summary", f"{n} elements, {n**3} triples, failures={dict(fails) or 0}, "
                               f"{secs:.1f}s (< 30s)")
    assert not fails
    assert secs < 30


def test_criterion_2_normalization_oracle(record_property):
    t0 = time.perf_counter()
    bad = checks = 0
    ranks = Counter()
    for seed in range(1000):
        f = random_formula(60, seed)
        idx = rn_index(f)
        ranks[idx.rank] += 1
        g = rn_formula(idx)
        for n in range(1, idx.rank + 4):
            m = canonical(n)
            checks += 1
            bad += check_brute(m, str(n), f) != check_brute(m, str(n), g)
    secs = time.perf_counter() - t0
    record_property("summary", f"1000 formulas, {checks} comparisons, {checks - bad}/{checks} "
                               f"agree, max rank {max(ranks)}, {secs:.1f}s (< 30s)")
    assert bad == 0
    assert secs < 30


def test_criterion_3_ladder_truth_table(record_property):
    bad = []
    for n in range(1, 16):
        m = canonical(n)
        for k in range(1, 16):
            if check_brute(m, str(n), rn_formula(psi(k))) != (n <= k):
                bad.append(("psi", n, k))
            if check_brute(m, str(n), rn_formula(phi(k))) != (n < k or n == k + 1):
                bad.append(("phi", n, k))
    record_property("summary", f"450 cells, {len(bad)} mismatches")
    assert bad == []


def test_criterion_4_fast_checker(record_property):
    t0 = time.perf_counter()
    bad = pairs = clustered = 0
    hvals = Counter()
    for seed in range(1000):
        m = mixed_model(seed)
        f = random_formula(60, seed)
        assert len(m) <= 12 and length(f) <= 60
        cond = condensation(m)
        clustered += any(len(c) > 1 for c in cond.members)
        hvals.update(model_indices(m).values())
        for s in m.states:
            pairs += 1
            bad += check_fast(m, s, f) != check_brute(m, s, f)
    secs = time.perf_counter() - t0
    record_property("summary", f"1000 instances ({clustered} with nontrivial clusters), "
                               f"{pairs - bad}/{pairs} state checks agree, h up to {max(hvals)}, "
                               f"{secs:.1f}s (< 60s)")
    assert bad == 0 and clustered > 0
    assert secs < 60


def test_criterion_5_fibonacci_bound(record_property):
    worst = None
    violations = 0
    for seed in range(10000):
        f = random_formula(1 + seed % 120, seed)
        r, n = rn_index(f).rank, length(f)
        violations += fib(r) > n
        if worst is None or fib(r) / n > worst[0]:
            worst = (fib(r) / n, r, n)
    record_property("summary", f"10000 formulas, {violations} violations, "
                               f"tightest fib(r)/|f| = {worst[0]:.3f} at rank {worst[1]}")
    assert violations == 0


def test_criterion_6_h_identity(record_property):
    ident = clusters = states = 0
    for seed in range(500):
        m = mixed_model(seed)
        h = model_indices(m)
        for w in m.states:
            states += 1
            ups = {h[v] for v in m.successors(w)}
            ident += ups != set(range(1, h[w] - 1)) | {h[w]}
            clusters += any(h[v] != h[w] for v in m.successors(w) if (v, w) in m.relation)
    record_property("summary", f"500 models, {states} states, identity violations={ident}, "
                               f"cluster violations={clusters}")
    assert ident == 0 and clusters == 0


def test_criterion_7_reduction_end_to_end(record_property):
    t0 = time.perf_counter()
    rng = random.Random("acceptance/reduction")
    tally = Counter()
    oversize = []
    total = 200
    for k in range(total):
        m = (2, 4, 6)[k % 3]
        width = rng.randint(1, 10)
        g = gen_slice_graph(m, width, rng.uniform(0.2, 0.8), k)
        c = construct(g)
        model = c.model()
        f, _, start = mc_instance(g)
        reach = apath_table(g, g.t)
        want = reach[g.s]
        tally["end_to_end"] += check_fast(model, start, f) == want == check_brute(model, start, f)
        h = model_indices(model)
        tally["index_dichotomy"] += all(
            h[state_out(v)] in (4 * i + 1, 4 * i + 2) and h[state_in(v)] in (4 * i + 2, 4 * i + 4)
            for v, i in g.slice_of.items())
        lad = set(c.ladder)
        can = canonical(4 * m)
        tally["ladder"] += (lad == set(can.states) and
                            {(u, v) for u, v in model.relation if u in lad and v in lad}
                            == set(can.relation))
        tally["depth_2m"] += condensation(model).depth == 2 * m
        if len(model) <= 4 * g.n:
            tally["size_4n"] += 1
        else:
            oversize.append((m, width, len(model), 4 * g.n))
    secs = time.perf_counter() - t0
    parts = ", ".join(f"{key} {tally[key]}/{total}"
                      for key in ("end_to_end", "index_dichotomy", "ladder", "depth_2m", "size_4n"))
    widths = sorted({w for _, w, _, _ in oversize})
    record_property("summary", f"{parts}; |U| > 4n at widths {widths}, {secs:.1f}s (< 120s)")
    assert all(tally[key] == total for key in ("end_to_end", "index_dichotomy", "ladder", "depth_2m"))
    assert secs < 120
    assert tally["size_4n"] == total, f"|U| <= 4n fails on {len(oversize)} graphs: {oversize[:5]}"


def test_criterion_8_kc_classes(record_property):
    cs = classes(KC)
    points = sorted(allowed_indices(KC))
    models = {n: canonical(n) for n in points}
    mismatches = 0
    brute_groups = {}
    for c in cs:
        for idx in c.members:
            got = tuple(check_brute(models[n], str(n), rn_formula(idx)) for n in points)
            mismatches += got != c.pattern
    for idx in all_indices(max(points) + 2):
        got = tuple(check_brute(models[n], str(n), rn_formula(idx)) for n in points)
        brute_groups.setdefault(got, []).append(idx)
    shared = [c for c in cs if phi(3) in c.members][0]
    record_property("summary", f"{len(cs)} classes (brute force {len(brute_groups)}, stated "
                               f"{STATED_KC_CLASSES}); phi3 shares pattern {shared.bits()} with "
                               f"{shared.representative}; {mismatches} pattern mismatches")
    assert mismatches == 0
    assert len(cs) == len(brute_groups)
    assert psi(2) in shared.members


def test_criterion_9_dag_evaluator(record_property):
    bad_rn = sum(rn_index_dag(rn_formula_dag(idx)) != idx for idx in all_indices(30))
    bad_rand = 0
    for seed in range(500):
        g = random_dag(2 + seed % 14, seed)
        bad_rand += rn_index_dag(g) != rn_index(g.unfold())
    record_property("summary", f"RN dags {len(all_indices(30)) - bad_rn}/{len(all_indices(30))}, "
                               f"random dags {500 - bad_rand}/500")
    assert bad_rn == 0 and bad_rand == 0
