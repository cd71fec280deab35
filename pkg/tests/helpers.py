"""Independent oracles shared by the test modules."""

from functools import lru_cache

from ipc1.formula import And, Impl, Or, rn_formula
from ipc1.kripke import canonical, model_indices, random_model, truth_sets
from ipc1.rnindex import all_indices

# H_N contains every H_n (n <= N, n != N-1) as the generated submodel of state
# n, so one brute-force pass over H_N yields the pattern over all of them.
PATTERN_N = 30


@lru_cache(maxsize=None)
def _big():
    return canonical(PATTERN_N)


def pattern(f) -> frozenset:
    """States n of H_N at which f holds, by direct forcing."""
    m = _big()
    mask = truth_sets(m, f)
    return frozenset(s for i, s in enumerate(m.states) if mask >> i & 1)


@lru_cache(maxsize=None)
def index_by_pattern(max_rank=26):
    table = {}
    for idx in all_indices(max_rank):
        table.setdefault(pattern(rn_formula(idx)), idx)
    return table


def oracle_meet(x, y):
    return index_by_pattern()[pattern(And(rn_formula(x), rn_formula(y)))]


def oracle_join(x, y):
    return index_by_pattern()[pattern(Or(rn_formula(x), rn_formula(y)))]


def oracle_rpc(x, y):
    return index_by_pattern()[pattern(Impl(rn_formula(x), rn_formula(y)))]


def mixed_model(seed: int, max_states: int = 12):
    """Random valid model, sometimes around an embedded canonical ladder."""
    n = 1 + seed % max_states
    lad = (seed // max_states) % 8 if seed % 3 else 0
    lad = min(lad, n + 1) if lad > 1 else 0
    return random_model(n, seed, 0.25, 0.1, lad)


def h_of_up(m, w):
    """Every case of the literal four-case definition of h that applies at w.

    Cluster-mates are left out of the strict up-set (they satisfy the same
    formulas), so the recursion is on clusters strictly above.
    """
    hs = model_indices(m)  # only used for the strictly-above values
    up = [v for v in m.successors(w) if (v, w) not in m.relation]
    above = {hs[v] for v in up}
    if w in m.valuation:
        return [1]
    cands = []
    if all(v not in m.valuation for v in up):
        cands.append(2)
    if 2 not in above and 1 in above:
        cands.append(3)
    for n in range(2, len(m) + 2):
        if n + 1 not in above and n in above and n - 1 in above:
            cands.append(n + 2)
    return cands
