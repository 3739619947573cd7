"""Sparse exact linear algebra over a cyclotomic field.

Vectors are dicts index -> nonzero Scalar.  Matrices are dict-of-rows with
explicit shape.  Echelon keeps a fully reduced basis (RREF invariant:
every stored row has a unit leading entry at its pivot column and zeros at
all other pivot columns), so reductions are one-pass and canonical.
"""

from __future__ import annotations

from .scalars import FieldCtx, Scalar

SpVec = dict  # index -> Scalar, zero entries never stored


def v_add(a: SpVec, b: SpVec) -> SpVec:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k)
        s = v if s is None else s + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def v_sub(a: SpVec, b: SpVec) -> SpVec:
    out = dict(a)
    for k, v in b.items():
        s = out.get(k)
        s = -v if s is None else s - v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def v_scale(a: SpVec, c) -> SpVec:
    if not c:
        return {}
    return {k: c * v for k, v in a.items()}


def v_addmul(acc: SpVec, c, b: SpVec) -> None:
    """In place: acc += c * b."""
    if not c:
        return
    for k, v in b.items():
        s = acc.get(k)
        s = c * v if s is None else s + c * v
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


def v_kron(a: SpVec, b: SpVec, nb: int) -> SpVec:
    out = {}
    for i, x in a.items():
        base = i * nb
        for j, y in b.items():
            out[base + j] = x * y
    return out


def v_from_list(ctx: FieldCtx, lst) -> SpVec:
    out = {}
    for i, v in enumerate(lst):
        s = ctx.scalar(v)
        if s:
            out[i] = s
    return out


def v_to_list(v: SpVec, n: int, ctx: FieldCtx):
    out = [ctx.zero] * n
    for k, val in v.items():
        out[k] = val
    return out


class Mat:
    """Sparse matrix; rows maps row index -> SpVec (empty rows absent)."""

    __slots__ = ("ctx", "nr", "nc", "rows")

    def __init__(self, ctx: FieldCtx, nr: int, nc: int, rows=None):
        self.ctx = ctx
        self.nr = nr
        self.nc = nc
        self.rows = rows if rows is not None else {}

    @classmethod
    def zeros(cls, ctx, nr, nc):
        return cls(ctx, nr, nc)

    @classmethod
    def identity(cls, ctx, n):
        one = ctx.one
        return cls(ctx, n, n, {i: {i: one} for i in range(n)})

    @classmethod
    def from_entries(cls, ctx, nr, nc, entries):
        m = cls(ctx, nr, nc)
        for i, j, v in entries:
            m.add_entry(i, j, v)
        return m

    @classmethod
    def from_dense(cls, ctx, dense):
        nr = len(dense)
        nc = len(dense[0]) if nr else 0
        m = cls(ctx, nr, nc)
        for i, row in enumerate(dense):
            for j, v in enumerate(row):
                m.add_entry(i, j, v)
        return m

    def add_entry(self, i, j, v):
        v = self.ctx.scalar(v)
        row = self.rows.get(i)
        if row is None:
            if v:
                self.rows[i] = {j: v}
            return
        s = row.get(j)
        s = v if s is None else s + v
        if s:
            row[j] = s
        else:
            row.pop(j, None)
            if not row:
                del self.rows[i]

    def entry(self, i, j) -> Scalar:
        row = self.rows.get(i)
        if row is None:
            return self.ctx.zero
        return row.get(j, self.ctx.zero)

    def is_zero(self) -> bool:
        return not self.rows

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return (self.nr, self.nc) == (other.nr, other.nc) and self.rows == other.rows

    def copy(self) -> "Mat":
        return Mat(self.ctx, self.nr, self.nc, {i: dict(r) for i, r in self.rows.items()})

    def add(self, other: "Mat") -> "Mat":
        assert (self.nr, self.nc) == (other.nr, other.nc)
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            if i in rows:
                rows[i] = v_add(rows[i], r)
                if not rows[i]:
                    del rows[i]
            else:
                rows[i] = dict(r)
        return Mat(self.ctx, self.nr, self.nc, rows)

    def sub(self, other: "Mat") -> "Mat":
        return self.add(other.scale(-1))

    def scale(self, c) -> "Mat":
        c = self.ctx.scalar(c)
        if not c:
            return Mat(self.ctx, self.nr, self.nc)
        return Mat(self.ctx, self.nr, self.nc,
                   {i: {j: c * v for j, v in r.items()} for i, r in self.rows.items()})

    def mul(self, other: "Mat") -> "Mat":
        assert self.nc == other.nr, f"shape mismatch {self.nc} vs {other.nr}"
        orows = other.rows
        rows = {}
        for i, r in self.rows.items():
            acc: SpVec = {}
            for k, a in r.items():
                br = orows.get(k)
                if br:
                    v_addmul(acc, a, br)
            if acc:
                rows[i] = acc
        return Mat(self.ctx, self.nr, other.nc, rows)

    def apply(self, vec: SpVec) -> SpVec:
        """Matrix times column vector."""
        out = {}
        for i, r in self.rows.items():
            s = None
            for k, a in r.items():
                x = vec.get(k)
                if x is not None:
                    s = a * x if s is None else s + a * x
            if s:
                out[i] = s
        return out

    def transpose(self) -> "Mat":
        rows: dict = {}
        for i, r in self.rows.items():
            for j, v in r.items():
                rows.setdefault(j, {})[i] = v
        return Mat(self.ctx, self.nc, self.nr, rows)

    def kron(self, other: "Mat") -> "Mat":
        rows = {}
        onr, onc = other.nr, other.nc
        for i, r in self.rows.items():
            for p, s in other.rows.items():
                acc = {}
                for j, a in r.items():
                    for q, b in s.items():
                        acc[j * onc + q] = a * b
                rows[i * onr + p] = acc
        return Mat(self.ctx, self.nr * onr, self.nc * onc, rows)

    def trace(self) -> Scalar:
        t = self.ctx.zero
        for i, r in self.rows.items():
            v = r.get(i)
            if v is not None:
                t = t + v
        return t

    def rank(self) -> int:
        ech = Echelon(self.ctx)
        for i in sorted(self.rows):
            ech.insert(self.rows[i])
        return ech.rank

    def inverse(self) -> "Mat":
        assert self.nr == self.nc
        n = self.nr
        ech = Echelon(self.ctx, track=True)
        for i in range(n):
            ech.insert(self.rows.get(i, {}))
        if ech.rank != n:
            raise ZeroDivisionError("matrix is singular")
        one = self.ctx.one
        rows = {}
        for j in range(n):
            # e_j = combo . M, so combo is row j of the inverse
            combo = ech.solve({j: one})
            if combo:
                rows[j] = combo
        return Mat(self.ctx, n, n, rows)

    def to_dense(self):
        return [[self.entry(i, j) for j in range(self.nc)] for i in range(self.nr)]

    def __repr__(self):
        return f"Mat({self.nr}x{self.nc}, {sum(len(r) for r in self.rows.values())} entries)"


class Echelon:
    """Incremental reduced row echelon basis with optional coordinates.

    With track=True, every call to insert() counts as one input vector; each
    stored row carries its expression in terms of input vectors, so reduce()
    can report how a vector decomposes over the inserted ones.
    """

    def __init__(self, ctx: FieldCtx, track: bool = False):
        self.ctx = ctx
        self.track = track
        self.pivots: dict[int, int] = {}  # pivot column -> stored row index
        self.rows: list[SpVec] = []
        self.coords: list[SpVec] = []
        self.n_inserted = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: SpVec):
        """Return (residual, combo): vec = residual + sum combo[j] * input_j."""
        work = dict(vec)
        combo: SpVec = {}
        hits = [c for c in work if c in self.pivots]
        for col in hits:
            cf = work.get(col)
            if not cf:
                continue
            ri = self.pivots[col]
            v_addmul(work, -cf, self.rows[ri])
            if self.track:
                v_addmul(combo, cf, self.coords[ri])
        return work, combo

    def insert(self, vec: SpVec) -> bool:
        idx = self.n_inserted
        self.n_inserted += 1
        residual, combo = self.reduce(vec)
        if not residual:
            return False
        piv = min(residual)
        lead = residual[piv]
        inv = lead.inverse()
        newrow = {k: inv * v for k, v in residual.items()}
        if self.track:
            coord = v_scale(combo, -inv)
            s = coord.get(idx)
            s = inv if s is None else s + inv
            if s:
                coord[idx] = s
            else:
                coord.pop(idx, None)
        else:
            coord = {}
        # keep RREF: clear the new pivot column everywhere
        for ri, row in enumerate(self.rows):
            cf = row.get(piv)
            if cf:
                v_addmul(row, -cf, newrow)
                if self.track:
                    v_addmul(self.coords[ri], -cf, coord)
        self.pivots[piv] = len(self.rows)
        self.rows.append(newrow)
        self.coords.append(coord)
        return True

    def contains(self, vec: SpVec) -> bool:
        residual, _ = self.reduce(vec)
        return not residual

    def solve(self, vec: SpVec):
        """Coefficients over inserted vectors if vec lies in the span, else None."""
        assert self.track
        residual, combo = self.reduce(vec)
        if residual:
            return None
        return combo


def rref(rows, ctx: FieldCtx):
    """Canonical RREF: returns (rows sorted by pivot column, pivot columns)."""
    ech = Echelon(ctx)
    for r in rows:
        ech.insert(r)
    pivs = sorted(ech.pivots)
    out = [ech.rows[ech.pivots[p]] for p in pivs]
    return out, pivs


def nullspace(rows, ncols: int, ctx: FieldCtx):
    """Canonical kernel basis of the linear system given by constraint rows.

    One basis vector per free column, listed by increasing free column; the
    free coordinate is 1.
    """
    red, pivs = rref(rows, ctx)
    pivset = set(pivs)
    by_piv = dict(zip(pivs, red))
    one = ctx.one
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        vec = {f: one}
        for p in pivs:
            cf = by_piv[p].get(f)
            if cf:
                vec[p] = -cf
        basis.append(vec)
    return basis


def span_solve(vectors, target: SpVec, ctx: FieldCtx):
    """Express target over the given vectors; dict index -> coeff, or None."""
    ech = Echelon(ctx, track=True)
    for v in vectors:
        ech.insert(v)
    return ech.solve(target)
