"""Independent brute-force oracle: plain tuples and loops, no package imports."""
from itertools import product


def heis_circ(x, y, p):
    half = pow(2, -1, p)
    br = (x[0] * y[1] - x[1] * y[0]) % p
    return ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + half * br) % p)


def heis_add(x, y, p):
    return tuple((a + b) % p for a, b in zip(x, y))


def ad(x, y, p):
    br = (x[0] * y[1] - x[1] * y[0]) % p
    return (y[0], y[1], (y[2] + br) % p)


def apply(M, x, p):
    return tuple(sum(M[i][j] * x[j] for j in range(3)) % p for i in range(3))


def points(p):
    return list(product(range(p), repeat=3))


def is_rbo(M, p):
    pts = points(p)
    for x in pts:
        bx = apply(M, x, p)
        for y in pts:
            if heis_circ(bx, apply(M, y, p), p) != apply(M, heis_circ(x, ad(bx, y, p), p), p):
                return False
    return True


def is_enhanced(M, p):
    pts = points(p)
    for a in pts:
        for x in pts:
            bxa = heis_add(apply(M, x, p), a, p)
            for y in pts:
                lhs = heis_circ(bxa, apply(M, y, p), p)
                rhs = heis_add(apply(M, heis_circ(x, ad(bxa, y, p), p), p), a, p)
                if lhs != rhs:
                    return False
    return True


def census(p=3):
    counts = {"rbo": 0, "enhanced": 0}
    for entries in product(range(p), repeat=9):
        M = (entries[0:3], entries[3:6], entries[6:9])
        if is_rbo(M, p):
            counts["rbo"] += 1
            counts["enhanced"] += is_enhanced(M, p)
    return counts


def singular_2x2(p):
    return sum((a * d - b * c) % p == 0 for a, b, c, d in product(range(p), repeat=4))


def automorphisms(add, n):
    """All permutations of range(n) preserving the table ``add`` (list of lists)."""
    from itertools import permutations

    return [s for s in permutations(range(n)) if s[0] == 0
            and all(s[add[a][b]] == add[s[a]][s[b]] for a in range(n) for b in range(n))]


def count_braces(add):
    """Labelled braces on an abelian group: maps lambda into Aut with lambda_{a + lambda_a(b)} = lambda_a lambda_b."""
    n = len(add)
    auts = automorphisms(add, n)
    count = 0
    for choice in product(auts, repeat=n - 1):
        lam = (tuple(range(n)),) + choice
        if all(lam[add[a][lam[a][b]]] == tuple(lam[a][lam[b][x]] for x in range(n))
               for a in range(n) for b in range(n)):
            count += 1
    return count


def cyclic(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def klein():
    return [[a ^ b for b in range(4)] for a in range(4)]
