"""Independent brute-force oracles the production code is tested against.

Everything here is deliberately naive: dense Fraction arithmetic, exhaustive
enumeration, no shared code with the solver paths under test.
"""

from fractions import Fraction
from itertools import combinations, product


def solve_square_system(a_rows, b):
    """Solve the k x k system exactly by dense Gaussian elimination.

    Returns the unique solution as a list of Fractions, or None when the
    matrix is singular. a_rows is a list of k rows of length k.
    """
    k = len(a_rows)
    m = [[Fraction(x) for x in row] + [Fraction(bi)]
         for row, bi in zip(a_rows, b)]
    for col in range(k):
        pivot = None
        for r in range(col, k):
            if m[r][col]:
                pivot = r
                break
        if pivot is None:
            return None
        m[col], m[pivot] = m[pivot], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for r in range(k):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][k] for r in range(k)]


def brute_force_lp_max(num_vars, dense_rows, rhs, objective):
    """All basic feasible solutions of {Ax = b, x >= 0} by support enumeration.

    Returns (feasible, best_value, best_x): feasible is True when any basic
    feasible solution exists; best_value/best_x give the maximum of the
    objective over them (None when infeasible). If the LP is feasible and
    bounded this is the exact optimum.
    """
    m = len(dense_rows)
    rhs = [Fraction(v) for v in rhs]
    feasible = False
    best = None
    best_x = None

    def consider(x):
        nonlocal feasible, best, best_x
        # verify all rows exactly
        for row, b in zip(dense_rows, rhs):
            if sum(Fraction(c) * xi for c, xi in zip(row, x)) != b:
                return
        if any(xi < 0 for xi in x):
            return
        feasible = True
        value = sum(Fraction(c) * xi for c, xi in zip(objective, x))
        if best is None or value > best:
            best = value
            best_x = list(x)

    consider([Fraction(0)] * num_vars)
    for k in range(1, min(m, num_vars) + 1):
        row_subsets = list(combinations(range(m), k))
        for cols in combinations(range(num_vars), k):
            for rows_idx in row_subsets:
                sub = [[dense_rows[r][c] for c in cols] for r in rows_idx]
                sol = solve_square_system(sub, [rhs[r] for r in rows_idx])
                if sol is None:
                    continue
                x = [Fraction(0)] * num_vars
                for c, v in zip(cols, sol):
                    x[c] = v
                consider(x)
    return feasible, best, best_x


def brute_force_pieces(graph, max_len=3):
    """All closed walks of length 2..max_len with >= 1 band arc, as canonical
    rotations, enumerated by trying every ordered edge tuple."""
    edges = list(range(graph.num_edges))
    found = set()
    for k in (2, 3):
        if k > max_len:
            continue
        for walk in product(edges, repeat=k):
            ok = True
            for i in range(k):
                head = graph.edge_gaps(walk[i])[1]
                tail_next = graph.edge_gaps(walk[(i + 1) % k])[0]
                if head != tail_next:
                    ok = False
                    break
            if not ok:
                continue
            if len(set(walk)) != k:
                continue
            if not any(graph.is_band(e) for e in walk):
                continue
            j = walk.index(min(walk))
            found.add(walk[j:] + walk[:j])
    return found


def proper_power_by_divisors(letters):
    """Smallest-root proper power decomposition by trying every divisor."""
    n = len(letters)
    for d in range(1, n):
        if n % d:
            continue
        if letters == letters[d:] + letters[:d]:
            return letters[:d], n // d
    return None
