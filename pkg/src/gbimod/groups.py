"""Finite abelian groups, their subgroups, characters and Schur-type counts.

Elements are exponent tuples against the declared generator orders.  All
enumeration orders are deterministic so downstream reports are byte-stable.
"""

from __future__ import annotations

from itertools import combinations, product
from math import gcd

from .scalars import FieldCtx, Scalar


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class AbelianGroup:
    """Direct product of cyclic groups of the given orders."""

    def __init__(self, orders):
        orders = tuple(int(n) for n in orders)
        if not orders or any(n < 1 for n in orders):
            raise ValueError(f"invalid cyclic orders {orders!r}")
        self.orders = orders
        self.identity = (0,) * len(orders)
        self.elements = [tuple(e) for e in product(*[range(n) for n in orders])]
        self.order = len(self.elements)
        self.exponent = 1
        for n in orders:
            self.exponent = _lcm(self.exponent, n)
        self._index = {g: i for i, g in enumerate(self.elements)}

    def op(self, a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, self.orders))

    def inv(self, a):
        return tuple((-x) % n for x, n in zip(a, self.orders))

    def power(self, a, k: int):
        return tuple((x * k) % n for x, n in zip(a, self.orders))

    def order_of(self, a) -> int:
        k = 1
        g = a
        while g != self.identity:
            g = self.op(g, a)
            k += 1
        return k

    def index(self, a) -> int:
        return self._index[a]

    def generators(self):
        out = []
        for i in range(len(self.orders)):
            g = [0] * len(self.orders)
            g[i] = 1 % self.orders[i]
            out.append(tuple(g))
        return out

    def closure(self, gens):
        """Subgroup generated by gens, as a sorted tuple of elements."""
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for h in frontier:
                for g in gens:
                    e = self.op(h, g)
                    if e not in seen:
                        seen.add(e)
                        nxt.append(e)
            frontier = nxt
        return tuple(sorted(seen))

    def subgroups(self):
        """All subgroups, sorted by (order, element list)."""
        # abelian groups of order <= 16 need at most 4 generators
        max_gens = max(1, self.order.bit_length() - 1) if self.order > 1 else 1
        found = set()
        elts = self.elements
        for r in range(max_gens + 1):
            for gens in combinations(elts, r):
                found.add(self.closure(gens))
        return sorted(found, key=lambda sub: (len(sub), sub))

    def invariant_factors(self, sub=None):
        """Invariant factor chain d_1 | d_2 | ... | d_r (each > 1) of a subgroup."""
        elems = list(sub) if sub is not None else list(self.elements)
        n = len(elems)
        if n == 1:
            return ()
        exp = 1
        for a in elems:
            exp = _lcm(exp, self.order_of(a))
        # counts[k] = number of elements with order dividing k, for k | exp
        divs = [k for k in range(1, exp + 1) if exp % k == 0]
        counts = {k: sum(1 for a in elems if self.power(a, k) == self.identity) for k in divs}

        def matches(chain):
            tot = 1
            for d in chain:
                tot *= d
            if tot != n:
                return False
            for k in divs:
                c = 1
                for d in chain:
                    c *= gcd(d, k)
                if c != counts[k]:
                    return False
            return True

        # enumerate divisibility chains d_1 | d_2 | ... with product n, largest = exp
        def chains(prod_left, top):
            if prod_left == 1:
                yield ()
                return
            for d in divs:
                if d > 1 and top % d == 0 and prod_left % d == 0:
                    for rest in chains(prod_left // d, d):
                        yield (d,) + rest

        for rev in sorted(chains(n, exp)):
            chain = tuple(reversed(rev))
            if chain[-1] == exp and matches(chain):
                return chain
        raise AssertionError("no invariant factor chain matched")  # unreachable

    def characters(self, sub=None):
        """All characters of a subgroup (default: the whole group).

        Every character of a subgroup of an abelian group is the restriction
        of a character of the whole group.  Deterministic order: sorted by
        value vector over the subgroup's sorted elements.
        """
        elems = sorted(sub) if sub is not None else sorted(self.elements)
        e = self.exponent
        seen = {}
        for exps in product(*[range(n) for n in self.orders]):
            vals = {}
            for h in elems:
                t = 0
                for x, t_i, n in zip(h, exps, self.orders):
                    t += x * t_i * (e // n)
                vals[h] = t % e
            key = tuple(vals[h] for h in elems)
            if key not in seen:
                seen[key] = Char(e, vals)
        out = [seen[k] for k in sorted(seen)]
        assert len(out) == len(elems)
        return out

    def trivial_char(self, sub=None):
        elems = sorted(sub) if sub is not None else sorted(self.elements)
        return Char(self.exponent, {h: 0 for h in elems})

    def __repr__(self):
        return "x".join(f"Z{n}" for n in self.orders)


class Char:
    """Character of a finite abelian (sub)group with values in mu_e.

    vals maps each element to t with chi(h) = zeta_e^t.
    """

    __slots__ = ("e", "vals")

    def __init__(self, e: int, vals: dict):
        self.e = e
        self.vals = vals

    def domain(self):
        return sorted(self.vals)

    def exponent_of(self, h) -> int:
        return self.vals[h]

    def scalar(self, ctx: FieldCtx, h) -> Scalar:
        return ctx.zeta(self.e, self.vals[h])

    def mul(self, other: "Char") -> "Char":
        assert self.e == other.e and set(self.vals) == set(other.vals)
        return Char(self.e, {h: (t + other.vals[h]) % self.e for h, t in self.vals.items()})

    def inverse(self) -> "Char":
        return Char(self.e, {h: (-t) % self.e for h, t in self.vals.items()})

    def restrict(self, elements) -> "Char":
        return Char(self.e, {h: self.vals[h] for h in elements})

    def is_trivial(self) -> bool:
        return not any(self.vals.values())

    def key(self):
        return tuple(self.vals[h] for h in sorted(self.vals))

    def label(self) -> str:
        """Stable short name: exponents of zeta_d on sorted non-identity elements."""
        dom = [h for h in sorted(self.vals) if any(h)]
        if not dom:
            return "triv"
        d = self.e
        for t in self.vals.values():
            if t:
                d = gcd(d, t)
        # reduce to the smallest root of unity that carries all values
        base = self.e // d if any(self.vals.values()) else 1
        parts = [str((self.vals[h] * base) // self.e) for h in dom]
        return f"z{base}:" + ",".join(parts) if base > 1 else "triv"

    def __eq__(self, other):
        return isinstance(other, Char) and self.e == other.e and self.vals == other.vals

    def __hash__(self):
        return hash((self.e, tuple(sorted(self.vals.items()))))

    def __repr__(self):
        return f"Char({self.label()})"


def schur_order(invariant_factors) -> int:
    """Order of the Schur multiplier of an abelian group with these factors."""
    ds = list(invariant_factors)
    out = 1
    for i in range(len(ds)):
        for j in range(i + 1, len(ds)):
            out *= gcd(ds[i], ds[j])
    return out


def smith_normal_form(rows):
    """Diagonal invariants of an integer matrix given as dict rows (sparse).

    Returns the list of nonzero diagonal entries (up to sign), standard
    elimination over Z.  Destroys nothing: works on a copy.
    """
    m = {i: dict(r) for i, r in rows.items()}

    def entries():
        for i, r in m.items():
            for j, v in r.items():
                if v:
                    yield i, j, v

    diag = []
    used_r, used_c = set(), set()
    while True:
        best = None
        for i, j, v in entries():
            if i in used_r or j in used_c:
                continue
            if best is None or abs(v) < abs(best[2]):
                best = (i, j, v)
                if abs(v) == 1:
                    break
        if best is None:
            break
        pi, pj, pv = best
        progress = True
        while progress:
            progress = False
            col = [(i, r[pj]) for i, r in m.items() if i not in used_r and i != pi and r.get(pj)]
            for i, v in col:
                q = v // pv
                if q:
                    ri = m[i]
                    for j2, w in m[pi].items():
                        ri[j2] = ri.get(j2, 0) - q * w
                        if not ri[j2]:
                            del ri[j2]
                if m[i].get(pj):
                    # remainder smaller than pivot: swap roles
                    pi, pv = i, m[i][pj]
                    progress = True
                    break
            if progress:
                continue
            prow = m[pi]
            cols = [(j, v) for j, v in prow.items() if j not in used_c and j != pj and v]
            for j, v in cols:
                q = v // pv
                if q:
                    for i2, r2 in m.items():
                        if r2.get(pj):
                            r2[j] = r2.get(j, 0) - q * r2[pj]
                            if not r2[j]:
                                del r2[j]
                if prow.get(j):
                    pj, pv = j, prow[j]
                    progress = True
                    break
        used_r.add(pi)
        used_c.add(pj)
        diag.append(abs(pv))
    return diag


def _cochain_maps(elems, op):
    """Integer matrices of d1: C1->C2 and d2: C2->C3 for the bar complex."""
    n = len(elems)
    idx1 = {g: i for i, g in enumerate(elems)}
    pairs = [(g, h) for g in elems for h in elems]
    idx2 = {p: i for i, p in enumerate(pairs)}
    d1 = {}
    for (g, h), r in ((p, idx2[p]) for p in pairs):
        row = {}
        for col, s in ((idx1[h], 1), (idx1[op(g, h)], -1), (idx1[g], 1)):
            row[col] = row.get(col, 0) + s
        d1[r] = {c: v for c, v in row.items() if v}
    d2 = {}
    r = 0
    for g in elems:
        for h in elems:
            for l in elems:
                row = {}
                for col, s in (
                    (idx2[(h, l)], 1),
                    (idx2[(op(g, h), l)], -1),
                    (idx2[(g, op(h, l))], 1),
                    (idx2[(g, h)], -1),
                ):
                    row[col] = row.get(col, 0) + s
                if row:
                    d2[r] = {c: v for c, v in row.items() if v}
                r += 1
    return d1, n, d2, n * n


def second_cohomology_order(group: AbelianGroup, sub) -> int:
    """|H^2(K, k*)| for an algebraically closed field k of characteristic 0.

    Counted via the finite coefficient group mu_N, N = exp(K): the long
    exact sequence for 0 -> mu_N -> k* -> k* -> 0 gives
    |H^2(K, k*)| = |H^2(K, mu_N)| / |Hom(K, mu_N)| = |H^2(K, mu_N)| / |K|.
    """
    elems = sorted(sub)
    k = len(elems)
    if k == 1:
        return 1
    N = 1
    for a in elems:
        N = _lcm(N, group.order_of(a))
    d1, n1, d2, n2 = _cochain_maps(elems, group.op)

    def count_kernel_mod(rows, ncols):
        diag = smith_normal_form(rows)
        cnt = 1
        for s in diag:
            cnt *= gcd(s, N)
        return cnt * N ** (ncols - len(diag))

    ker_d2 = count_kernel_mod(d2, n2)
    ker_d1 = count_kernel_mod(d1, n1)
    im_d1 = N**n1 // ker_d1
    h2_muN = ker_d2 // im_d1
    assert h2_muN % k == 0
    return h2_muN // k
