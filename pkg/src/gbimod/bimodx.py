"""Symmetric bimodules over an algebra with a group action, and the
block-graded tensor calculus between them.

A morphism from M to N is a tuple (f_phi) over the group; component f_phi is
an algebra-bilinear map M -> N intertwining the actions twisted by phi
(f λ(a) = λ(phi(a)) f and the same on the right).  The twist acts as the
identity on matrices, so composition is plain convolution over the group.

The tensor of M and N splits into blocks indexed by group elements psi,
block psi being the quotient of M (x) N by m·a (x) n - m (x) psi(a)·n.
Each block splits further along the direct-summand ranges of the factors;
every quotient keeps an exact section (surviving coordinate pairs) and
projection (pivot-pair expansions), so all maps through tensors are exact.
"""

from __future__ import annotations

from .linalg import Echelon, Mat, nullspace, v_addmul
from .algebra import GroupAction


# ---------------------------------------------------------------------------
# objects


class Bimodule:
    def __init__(self, act: GroupAction, dim: int, kind: str, ranges=None, name=""):
        self.act = act
        self.ctx = act.algebra.ctx
        self.dim = dim
        self.kind = kind
        self.ranges = ranges or [(0, dim)]
        self.name = name or kind
        self.biproj = False  # projective as a one-sided module on both sides
        self._lam = {}
        self._rho = {}
        self._gd = None

    def lam(self, b: int) -> Mat:
        m = self._lam.get(b)
        if m is None:
            m = self._lam_build(b)
            self._lam[b] = m
        return m

    def rho(self, b: int) -> Mat:
        m = self._rho.get(b)
        if m is None:
            m = self._rho_build(b)
            self._rho[b] = m
        return m

    def lam_vec(self, vec: dict) -> Mat:
        out = Mat(self.ctx, self.dim, self.dim)
        for b, c in vec.items():
            for i, row in self.lam(b).rows.items():
                for j, v in row.items():
                    out.add_entry(i, j, c * v)
        return out

    def rho_vec(self, vec: dict) -> Mat:
        out = Mat(self.ctx, self.dim, self.dim)
        for b, c in vec.items():
            for i, row in self.rho(b).rows.items():
                for j, v in row.items():
                    out.add_entry(i, j, c * v)
        return out

    def _gen_seeds(self):
        return []

    def stabilizer(self):
        raise NotImplementedError(f"no stabilizer rule for kind {self.kind!r}")

    def witness(self, alpha) -> Mat:
        """Iso M -> M intertwining actions twisted by alpha on both sides."""
        if alpha == self.act.group.identity:
            return Mat.identity(self.ctx, self.dim)
        return self._witness_build(alpha)

    def _witness_build(self, alpha) -> Mat:
        # generic fallback: scan the twisted hom space for an invertible element
        basis = hom_component(self, self, alpha)
        cands = list(basis)
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                cands.append(basis[i].add(basis[j]))
        for m in cands:
            if m.rank() == self.dim:
                return m
        raise ValueError("no invertible twisted endomorphism found (witness)")

    def __repr__(self):
        return f"Bimodule[{self.name}, dim={self.dim}]"


def _restrict(mat: Mat, rows, cols, strict=True) -> Mat:
    rpos = {r: p for p, r in enumerate(rows)}
    cpos = {c: p for p, c in enumerate(cols)}
    out = Mat(mat.ctx, len(rows), len(cols))
    for i, row in mat.rows.items():
        pi = rpos.get(i)
        for j, v in row.items():
            pj = cpos.get(j)
            if pj is None:
                continue
            if pi is None:
                if strict:
                    raise ValueError("matrix does not preserve the coordinate subset")
                continue
            out.add_entry(pi, pj, v)
    return out


class RegularBimodule(Bimodule):
    """A (or the span of a group-stable set of blocks) as a bimodule over itself."""

    def __init__(self, act, coords=None, name="A"):
        alg = act.algebra
        self.coords = list(coords) if coords is not None else list(range(alg.dim))
        ranges = _block_ranges(alg, self.coords)
        super().__init__(act, len(self.coords), "regular", ranges, name)
        self.full = len(self.coords) == alg.dim

    def _lam_build(self, b):
        return _restrict(self.act.algebra.L_basis(b), self.coords, self.coords, strict=False)

    def _rho_build(self, b):
        return _restrict(self.act.algebra.R_basis(b), self.coords, self.coords, strict=False)

    def _gen_seeds(self):
        alg = self.act.algebra
        pos = {c: p for p, c in enumerate(self.coords)}
        vec = {pos[i]: self.ctx.one for i in alg.idem if i in pos}
        return [vec]

    def stabilizer(self):
        if self.full:
            return tuple(self.act.group.elements)
        verts = {self.act.algebra.src[c] for c in self.coords}
        return tuple(g for g in self.act.group.elements
                     if {self.act.vperm[g][v] for v in verts} == verts)

    def _witness_build(self, alpha):
        if alpha not in self.stabilizer():
            raise ValueError("witness twist outside the stabilizer")
        return _restrict(self.act.mats[alpha], self.coords, self.coords)


def _block_ranges(alg, coords):
    """Contiguous runs of coords lying in single algebra blocks, if clean."""
    if not coords:
        return [(0, 0)]
    runs = []
    start = 0
    for p in range(1, len(coords) + 1):
        if p == len(coords) or alg.block_of[alg.src[coords[p]]] != alg.block_of[alg.src[coords[p - 1]]]:
            runs.append((start, p))
            start = p
    blocks_seen = [alg.block_of[alg.src[coords[s]]] for s, _ in runs]
    if len(set(blocks_seen)) != len(runs):
        return [(0, len(coords))]
    return runs


class ProjBimodule(Bimodule):
    """Ae_i tensored over the base field with e_jA."""

    def __init__(self, act, i: int, j: int, name=None):
        alg = act.algebra
        self.vi = i
        self.vj = j
        self.lrows = alg.left_ideal(i)
        self.rcols = alg.right_ideal(j)
        dim = len(self.lrows) * len(self.rcols)
        super().__init__(act, dim, "proj", None,
                         name or f"P({alg.vertices[i]},{alg.vertices[j]})")
        self.biproj = True

    def pair_pos(self, p: int, q: int) -> int:
        return self.lrows.index(p) * len(self.rcols) + self.rcols.index(q)

    def _lam_build(self, b):
        alg = self.act.algebra
        sub = _restrict(alg.L_basis(b), self.lrows, self.lrows, strict=False)
        return sub.kron(Mat.identity(self.ctx, len(self.rcols)))

    def _rho_build(self, b):
        alg = self.act.algebra
        sub = _restrict(alg.R_basis(b), self.rcols, self.rcols, strict=False)
        return Mat.identity(self.ctx, len(self.lrows)).kron(sub)

    def _gen_seeds(self):
        alg = self.act.algebra
        return [{self.pair_pos(alg.idem[self.vi], alg.idem[self.vj]): self.ctx.one}]

    def stabilizer(self):
        return self.act.stab_pair(self.vi, self.vj)

    def _witness_build(self, alpha):
        if alpha not in self.stabilizer():
            raise ValueError("witness twist outside the stabilizer")
        m = self.act.mats[alpha]
        wl = _restrict(m, self.lrows, self.lrows)
        wr = _restrict(m, self.rcols, self.rcols)
        return wl.kron(wr)


class TwistBimodule(Bimodule):
    """Same space as the base, with actions precomposed by group elements."""

    def __init__(self, base: Bimodule, gl, gr, name=None):
        super().__init__(base.act, base.dim, "twist", list(base.ranges),
                         name or f"tw({base.name})")
        self.base = base
        self.gl = gl
        self.gr = gr
        self.biproj = base.biproj

    def _lam_build(self, b):
        return self.base.lam_vec(self.act.apply(self.gl, {b: self.ctx.one}))

    def _rho_build(self, b):
        return self.base.rho_vec(self.act.apply(self.gr, {b: self.ctx.one}))

    def _gen_seeds(self):
        return self.base._gen_seeds()


class _Slice:
    __slots__ = ("mlo", "mhi", "nlo", "nhi", "offset", "pairs", "pos", "expand")


def _quotient_slice(ctx, gens, mlo, mhi, nlo, nhi, rho_cols, lam_cols, offset):
    """Balanced quotient of the coordinate rectangle [mlo,mhi) x [nlo,nhi).

    rho_cols/lam_cols map a generator index to the TRANSPOSE of its action
    matrix (so rows give columns).  Returns a _Slice with global positions
    starting at offset.
    """
    nw = nhi - nlo
    ech = Echelon(ctx)
    for a in gens:
        rt = rho_cols[a]
        lt = lam_cols[a]
        for i in range(mlo, mhi):
            rcol = rt.rows.get(i)
            for j in range(nlo, nhi):
                lcol = lt.rows.get(j)
                vec = {}
                if rcol:
                    for k, c in rcol.items():
                        vec[(k - mlo) * nw + (j - nlo)] = c
                if lcol:
                    for l, c in lcol.items():
                        key = (i - mlo) * nw + (l - nlo)
                        s = vec.get(key)
                        s = -c if s is None else s - c
                        if s:
                            vec[key] = s
                        else:
                            vec.pop(key, None)
                if vec:
                    ech.insert(vec)
    piv = ech.pivots
    sl = _Slice()
    sl.mlo, sl.mhi, sl.nlo, sl.nhi = mlo, mhi, nlo, nhi
    sl.offset = offset
    sl.pairs = []
    sl.pos = {}
    local_pos = {}
    for i in range(mlo, mhi):
        for j in range(nlo, nhi):
            loc = (i - mlo) * nw + (j - nlo)
            if loc not in piv:
                local_pos[loc] = offset + len(sl.pairs)
                sl.pos[(i, j)] = offset + len(sl.pairs)
                sl.pairs.append((i, j))
    sl.expand = {}
    for loc, ri in piv.items():
        row = ech.rows[ri]
        i = mlo + loc // nw
        j = nlo + loc % nw
        sl.expand[(i, j)] = {local_pos[f]: -c for f, c in row.items() if f != loc}
    return sl


class _TBlock:
    __slots__ = ("psi", "slices", "slice_map", "offset", "dim")


class TensorBimodule(Bimodule):
    def __init__(self, M: Bimodule, N: Bimodule):
        act = M.act
        alg = act.algebra
        ctx = M.ctx
        one = ctx.one
        gens = alg.gen_indices
        rho_cols = {a: M.rho(a).transpose() for a in gens}
        m_rid = [None] * M.dim
        for ri, (lo, hi) in enumerate(M.ranges):
            for k in range(lo, hi):
                m_rid[k] = ri
        n_rid = [None] * N.dim
        for ri, (lo, hi) in enumerate(N.ranges):
            for k in range(lo, hi):
                n_rid[k] = ri
        blocks = []
        offset = 0
        ranges = []
        rep_pair = []
        coord_block = []
        for psi in act.group.elements:
            lam_cols = {a: N.lam_vec(act.apply(psi, {a: one})).transpose() for a in gens}
            blk = _TBlock()
            blk.psi = psi
            blk.offset = offset
            blk.slices = []
            blk.slice_map = {}
            for mi, (mlo, mhi) in enumerate(M.ranges):
                for ni, (nlo, nhi) in enumerate(N.ranges):
                    sl = _quotient_slice(ctx, gens, mlo, mhi, nlo, nhi,
                                         rho_cols, lam_cols, offset)
                    blk.slices.append(sl)
                    blk.slice_map[(mi, ni)] = sl
                    if sl.pairs:
                        ranges.append((offset, offset + len(sl.pairs)))
                        rep_pair.extend(sl.pairs)
                        coord_block.extend([psi] * len(sl.pairs))
                    offset += len(sl.pairs)
            blk.dim = offset - blk.offset
            blocks.append(blk)
        super().__init__(act, offset, "tensor", ranges,
                         f"({M.name}(x){N.name})")
        self.biproj = M.biproj or N.biproj
        self.fM = M
        self.fN = N
        self.blocks = blocks
        self.block_by_psi = {b.psi: b for b in blocks}
        self.rep_pair = rep_pair
        self.coord_block = coord_block
        self._m_rid = m_rid
        self._n_rid = n_rid

    def P(self, psi, k, l) -> dict:
        """Class of the pure pair (k, l) inside block psi, as a sparse vector."""
        blk = self.block_by_psi[psi]
        sl = blk.slice_map[(self._m_rid[k], self._n_rid[l])]
        pos = sl.pos.get((k, l))
        if pos is not None:
            return {pos: self.ctx.one}
        return sl.expand[(k, l)]

    def _lam_build(self, b):
        lt = self.fM.lam(b).transpose()
        out = Mat(self.ctx, self.dim, self.dim)
        for blk in self.blocks:
            for sl in blk.slices:
                for (i, j) in sl.pairs:
                    q = sl.pos[(i, j)]
                    col = lt.rows.get(i)
                    if not col:
                        continue
                    acc = {}
                    for k, c in col.items():
                        v_addmul(acc, c, self.P(blk.psi, k, j))
                    for r, v in acc.items():
                        out.add_entry(r, q, v)
        return out

    def _rho_build(self, b):
        one = self.ctx.one
        out = Mat(self.ctx, self.dim, self.dim)
        for blk in self.blocks:
            rt = self.fN.rho_vec(self.act.apply(blk.psi, {b: one})).transpose()
            for sl in blk.slices:
                for (i, j) in sl.pairs:
                    q = sl.pos[(i, j)]
                    col = rt.rows.get(j)
                    if not col:
                        continue
                    acc = {}
                    for l, c in col.items():
                        v_addmul(acc, c, self.P(blk.psi, i, l))
                    for r, v in acc.items():
                        out.add_entry(r, q, v)
        return out


_tensor_cache: dict = {}


def x_tensor(M: Bimodule, N: Bimodule) -> TensorBimodule:
    key = (id(M), id(N))
    hit = _tensor_cache.get(key)
    if hit is not None and hit[0] is M and hit[1] is N:
        return hit[2]
    T = TensorBimodule(M, N)
    _tensor_cache[key] = (M, N, T)
    return T


# ---------------------------------------------------------------------------
# morphisms


class XMor:
    """Group-indexed tuple of twisted bimodule maps; composition is
    convolution over the group."""

    __slots__ = ("src", "tgt", "comps")

    def __init__(self, src: Bimodule, tgt: Bimodule, comps: dict):
        self.src = src
        self.tgt = tgt
        self.comps = {g: m for g, m in comps.items() if m.rows}

    @staticmethod
    def identity(M: Bimodule) -> "XMor":
        return XMor(M, M, {M.act.group.identity: Mat.identity(M.ctx, M.dim)})

    def comp(self, g):
        return self.comps.get(g)

    def compose(self, other: "XMor") -> "XMor":
        """self after other."""
        assert other.tgt is self.src, "composition source/target mismatch"
        G = self.src.act.group
        comps = {}
        for phi, fm in other.comps.items():
            for beta, gm in self.comps.items():
                sigma = G.op(beta, phi)
                prod = gm.mul(fm)
                if prod.rows:
                    cur = comps.get(sigma)
                    comps[sigma] = prod if cur is None else cur.add(prod)
        return XMor(other.src, self.tgt, comps)

    def add(self, other: "XMor") -> "XMor":
        assert other.src is self.src and other.tgt is self.tgt
        comps = dict(self.comps)
        for g, m in other.comps.items():
            cur = comps.get(g)
            comps[g] = m if cur is None else cur.add(m)
        return XMor(self.src, self.tgt, comps)

    def sub(self, other: "XMor") -> "XMor":
        return self.add(other.scale(-1))

    def scale(self, c) -> "XMor":
        c = self.src.ctx.scalar(c)
        return XMor(self.src, self.tgt, {g: m.scale(c) for g, m in self.comps.items()})

    def is_zero(self) -> bool:
        return not self.comps

    def __eq__(self, other):
        if not isinstance(other, XMor):
            return NotImplemented
        return (self.src is other.src and self.tgt is other.tgt
                and self.comps == other.comps)

    def apply(self, g, vec: dict) -> dict:
        m = self.comps.get(g)
        return m.apply(vec) if m is not None else {}

    def __repr__(self):
        return f"XMor({self.src.name} -> {self.tgt.name}; comps={len(self.comps)})"


def xmor_is_morphism(f: XMor) -> bool:
    """Check the twisted intertwining laws on algebra generators."""
    act = f.src.act
    one = f.src.ctx.one
    for phi, m in f.comps.items():
        for a in act.algebra.gen_indices:
            av = act.apply(phi, {a: one})
            if m.mul(f.src.lam(a)) != f.tgt.lam_vec(av).mul(m):
                return False
            if m.mul(f.src.rho(a)) != f.tgt.rho_vec(av).mul(m):
                return False
    return True


def bimodule_check(M: Bimodule, full=False) -> bool:
    """Bimodule axioms; with full=True also multiplicativity on all basis pairs."""
    alg = M.act.algebra
    ctx = M.ctx
    iden = Mat.identity(ctx, M.dim)
    lam_unit = Mat(ctx, M.dim, M.dim)
    rho_unit = Mat(ctx, M.dim, M.dim)
    for e in alg.idem:
        lam_unit = lam_unit.add(M.lam(e))
        rho_unit = rho_unit.add(M.rho(e))
    if lam_unit != iden or rho_unit != iden:
        return False
    for a in alg.gen_indices:
        for b in alg.gen_indices:
            if M.lam(a).mul(M.rho(b)) != M.rho(b).mul(M.lam(a)):
                return False
    if full:
        for i in range(alg.dim):
            for j in range(alg.dim):
                prod = alg.mult_pairs.get((i, j), {})
                if M.lam_vec(prod) != M.lam(i).mul(M.lam(j)):
                    return False
                if M.rho_vec(prod) != M.rho(j).mul(M.rho(i)):
                    return False
    return True


# ---------------------------------------------------------------------------
# tensor of morphisms, associators


def x_tensor_mor(f: XMor, g: XMor, Tsrc=None, Ttgt=None) -> XMor:
    if Tsrc is None:
        Tsrc = x_tensor(f.src, g.src)
    if Ttgt is None:
        Ttgt = x_tensor(f.tgt, g.tgt)
    G = f.src.act.group
    ctx = f.src.ctx
    gtrans = {beta: m.transpose() for beta, m in g.comps.items()}
    comps = {}
    for sigma, fmat in f.comps.items():
        ft = fmat.transpose()
        out = Mat(ctx, Ttgt.dim, Tsrc.dim)
        for blk in Tsrc.blocks:
            gamma = blk.psi
            for dblk in Ttgt.blocks:
                delta = dblk.psi
                beta = G.op(G.op(delta, sigma), G.inv(gamma))
                gt = gtrans.get(beta)
                if gt is None:
                    continue
                for sl in blk.slices:
                    for (i, j) in sl.pairs:
                        colf = ft.rows.get(i)
                        if not colf:
                            continue
                        colg = gt.rows.get(j)
                        if not colg:
                            continue
                        q = sl.pos[(i, j)]
                        acc = {}
                        for k, c1 in colf.items():
                            for l, c2 in colg.items():
                                v_addmul(acc, c1 * c2, Ttgt.P(delta, k, l))
                        for r, v in acc.items():
                            out.add_entry(r, q, v)
        if out.rows:
            comps[sigma] = out
    return XMor(Tsrc, Ttgt, comps)


def assoc(U: Bimodule, V: Bimodule, W: Bimodule) -> XMor:
    """Canonical iso U(x)(V(x)W) -> (U(x)V)(x)W; block (c; inner d) lands in
    block (outer c*d; inner c)."""
    VW = x_tensor(V, W)
    T1 = x_tensor(U, VW)
    UV = x_tensor(U, V)
    T2 = x_tensor(UV, W)
    G = U.act.group
    mat = Mat(U.ctx, T2.dim, T1.dim)
    for blk in T1.blocks:
        c = blk.psi
        for sl in blk.slices:
            if not sl.pairs:
                continue
            d = VW.coord_block[sl.nlo]
            e = G.op(c, d)
            for (i, t) in sl.pairs:
                q = sl.pos[(i, t)]
                vj, wk = VW.rep_pair[t]
                acc = {}
                for uv, c1 in UV.P(c, i, vj).items():
                    v_addmul(acc, c1, T2.P(e, uv, wk))
                for r, v in acc.items():
                    mat.add_entry(r, q, v)
    return XMor(T1, T2, {G.identity: mat})


def assoc_inv(U: Bimodule, V: Bimodule, W: Bimodule) -> XMor:
    VW = x_tensor(V, W)
    T1 = x_tensor(U, VW)
    UV = x_tensor(U, V)
    T2 = x_tensor(UV, W)
    G = U.act.group
    mat = Mat(U.ctx, T1.dim, T2.dim)
    for blk in T2.blocks:
        e = blk.psi
        for sl in blk.slices:
            if not sl.pairs:
                continue
            c = UV.coord_block[sl.mlo]
            d = G.op(e, G.inv(c))
            for (s, wk) in sl.pairs:
                q = sl.pos[(s, wk)]
                ui, vj = UV.rep_pair[s]
                acc = {}
                for t, c1 in VW.P(d, vj, wk).items():
                    v_addmul(acc, c1, T1.P(c, ui, t))
                for r, v in acc.items():
                    mat.add_entry(r, q, v)
    return XMor(T2, T1, {G.identity: mat})


# ---------------------------------------------------------------------------
# hom spaces


class _GenData:
    __slots__ = ("gens", "W", "steps", "coords")


def _gen_data(M: Bimodule) -> _GenData:
    if M._gd is not None:
        return M._gd
    ctx = M.ctx
    alg = M.act.algebra
    one = ctx.one
    ech = Echelon(ctx, track=True)
    W = []
    posmap = {}
    gens = []

    def try_add(vec, how):
        idx = ech.n_inserted
        if ech.insert(vec):
            posmap[idx] = len(W)
            W.append((vec, how))
            return True
        return False

    actions = [("L", a, M.lam(a)) for a in alg.gen_indices]
    actions += [("R", a, M.rho(a)) for a in alg.gen_indices]
    seeds = M._gen_seeds() + [{k: one} for k in range(M.dim)]
    for seed in seeds:
        if ech.rank == M.dim:
            break
        if not seed or ech.contains(seed):
            continue
        t = len(gens)
        gens.append(seed)
        try_add(seed, ("gen", t))
        frontier = [len(W) - 1]
        while frontier:
            new = []
            for pos in frontier:
                w = W[pos][0]
                for side, a, mat in actions:
                    v2 = mat.apply(w)
                    if v2 and try_add(v2, (side, a, pos)):
                        new.append(len(W) - 1)
            frontier = new
    assert ech.rank == M.dim

    def conv(combo):
        return {posmap[i]: c for i, c in combo.items()}

    steps = []
    for s, (w, _) in enumerate(W):
        for side, a, mat in actions:
            v2 = mat.apply(w)
            combo = ech.solve(v2)
            steps.append((s, side, a, conv(combo)))
    coords = [conv(ech.solve({k: one})) for k in range(M.dim)]
    gd = _GenData()
    gd.gens = gens
    gd.W = W
    gd.steps = steps
    gd.coords = coords
    M._gd = gd
    return gd


def hom_component(M: Bimodule, N: Bimodule, phi) -> list:
    """Canonical basis (as matrices) of bimodule maps M -> N twisted by phi."""
    gd = _gen_data(M)
    act = M.act
    alg = act.algebra
    ctx = M.ctx
    one = ctx.one
    dN = N.dim
    lamp = {}
    rhop = {}
    for a in alg.gen_indices:
        av = act.apply(phi, {a: one})
        lamp[a] = N.lam_vec(av)
        rhop[a] = N.rho_vec(av)
    T = len(gd.gens)
    F = []
    for (w, how) in gd.W:
        if how[0] == "gen":
            F.append({how[1]: Mat.identity(ctx, dN)})
        else:
            side, a, parent = how
            m = lamp[a] if side == "L" else rhop[a]
            cur = {}
            for t, fp in F[parent].items():
                prod = m.mul(fp)
                if prod.rows:
                    cur[t] = prod
            F.append(cur)
    rows = []
    for (s, side, a, combo) in gd.steps:
        m = lamp[a] if side == "L" else rhop[a]
        K = {}
        for t, fp in F[s].items():
            prod = m.mul(fp)
            if prod.rows:
                K[t] = prod
        for i, c in combo.items():
            for t, fi in F[i].items():
                delta = fi.scale(-c)
                cur = K.get(t)
                K[t] = delta if cur is None else cur.add(delta)
        ridx = set()
        for kt in K.values():
            ridx.update(kt.rows)
        for r in sorted(ridx):
            row = {}
            for t, kt in K.items():
                rr = kt.rows.get(r)
                if rr:
                    for col, v in rr.items():
                        row[t * dN + col] = v
            if row:
                rows.append(row)
    sols = nullspace(rows, T * dN, ctx)
    out = []
    for u in sols:
        uslices = [dict() for _ in range(T)]
        for key, val in u.items():
            uslices[key // dN][key % dN] = val
        vecs = []
        for (w, how) in gd.W:
            if how[0] == "gen":
                vecs.append(uslices[how[1]])
            else:
                side, a, parent = how
                m = lamp[a] if side == "L" else rhop[a]
                vecs.append(m.apply(vecs[parent]))
        fm = Mat(ctx, dN, M.dim)
        for k, combo in enumerate(gd.coords):
            acc = {}
            for i, c in combo.items():
                v_addmul(acc, c, vecs[i])
            for r, v in acc.items():
                fm.add_entry(r, k, v)
        out.append(fm)
    return out


def hom_basis(M: Bimodule, N: Bimodule) -> list:
    """Basis of the full morphism space as single-component tuples, ordered
    by group element then by the canonical kernel basis."""
    out = []
    for phi in M.act.group.elements:
        for fm in hom_component(M, N, phi):
            out.append(XMor(M, N, {phi: fm}))
    return out


def hom_component_oracle(M: Bimodule, N: Bimodule, phi) -> list:
    """Same space as hom_component, computed from the full matrix equations
    (slow; used to cross-check the generator-parametrized solver)."""
    act = M.act
    alg = act.algebra
    ctx = M.ctx
    one = ctx.one
    dM, dN = M.dim, N.dim
    rows = []
    for a in alg.gen_indices:
        av = act.apply(phi, {a: one})
        for lam_side in (True, False):
            src_t = (M.lam(a) if lam_side else M.rho(a)).transpose()
            tgt_m = N.lam_vec(av) if lam_side else N.rho_vec(av)
            for r in range(dN):
                trow = tgt_m.rows.get(r)
                for c in range(dM):
                    # row (r, c) of f lam(a) - lam'(a) f = 0, unknowns flattened
                    row = {}
                    col = src_t.rows.get(c)
                    if col:
                        for k, v in col.items():
                            row[r * dM + k] = v
                    if trow:
                        for k, v in trow.items():
                            key = k * dM + c
                            s = row.get(key)
                            s = -v if s is None else s - v
                            if s:
                                row[key] = s
                            else:
                                row.pop(key, None)
                    if row:
                        rows.append(row)
    sols = nullspace(rows, dN * dM, ctx)
    out = []
    for u in sols:
        fm = Mat(ctx, dN, dM)
        for key, v in u.items():
            fm.add_entry(key // dM, key % dM, v)
        out.append(fm)
    return out


def mats_span_equal(b1, b2, ctx, shape) -> bool:
    """Do two lists of matrices span the same subspace?"""
    nr, nc = shape

    def flat(m):
        return {i * nc + j: v for i, r in m.rows.items() for j, v in r.items()}

    e1 = Echelon(ctx)
    for m in b1:
        e1.insert(flat(m))
    e2 = Echelon(ctx)
    for m in b2:
        e2.insert(flat(m))
    if e1.rank != e2.rank:
        return False
    return all(e1.contains(flat(m)) for m in b2)


# ---------------------------------------------------------------------------
# one-sided modules and the module actions of bimodules


class LeftModule:
    def __init__(self, act: GroupAction, dim: int, gen_mats: dict, name="V"):
        self.act = act
        self.ctx = act.algebra.ctx
        self.dim = dim
        self.gen_mats = gen_mats  # basis index (idempotents + arrows) -> Mat
        self.name = name
        self._lam = dict(gen_mats)

    @classmethod
    def projective(cls, act, v: int):
        alg = act.algebra
        coords = alg.left_ideal(v)
        mats = {a: _restrict(alg.L_basis(a), coords, coords, strict=False)
                for a in alg.gen_indices}
        return cls(act, len(coords), mats, name=f"Ae{alg.vertices[v]}")

    def lam(self, b: int) -> Mat:
        m = self._lam.get(b)
        if m is None:
            key = self.act.algebra.basis_keys[b]
            assert key[0] != "e"
            m = Mat.identity(self.ctx, self.dim)
            arrow_of = {(a,): i for (a,), i in
                        ((self.act.algebra.basis_keys[i], i)
                         for i in self.act.algebra.arrow_basis)}
            for a in key:
                m = self._lam[arrow_of[(a,)]].mul(m)
            self._lam[b] = m
        return m

    def lam_vec(self, vec: dict) -> Mat:
        out = Mat(self.ctx, self.dim, self.dim)
        for b, c in vec.items():
            for i, row in self.lam(b).rows.items():
                for j, v in row.items():
                    out.add_entry(i, j, c * v)
        return out

    def __repr__(self):
        return f"LeftModule[{self.name}, dim={self.dim}]"


class RightModule:
    def __init__(self, act: GroupAction, dim: int, gen_mats: dict, name="V"):
        self.act = act
        self.ctx = act.algebra.ctx
        self.dim = dim
        self.gen_mats = gen_mats
        self.name = name
        self._rho = dict(gen_mats)

    @classmethod
    def projective(cls, act, v: int):
        alg = act.algebra
        coords = alg.right_ideal(v)
        mats = {a: _restrict(alg.R_basis(a), coords, coords, strict=False)
                for a in alg.gen_indices}
        return cls(act, len(coords), mats, name=f"e{alg.vertices[v]}A")

    def rho(self, b: int) -> Mat:
        m = self._rho.get(b)
        if m is None:
            key = self.act.algebra.basis_keys[b]
            assert key[0] != "e"
            m = Mat.identity(self.ctx, self.dim)
            arrow_of = {(a,): i for (a,), i in
                        ((self.act.algebra.basis_keys[i], i)
                         for i in self.act.algebra.arrow_basis)}
            for a in reversed(key):
                m = self._rho[arrow_of[(a,)]].mul(m)
            self._rho[b] = m
        return m

    def rho_vec(self, vec: dict) -> Mat:
        out = Mat(self.ctx, self.dim, self.dim)
        for b, c in vec.items():
            for i, row in self.rho(b).rows.items():
                for j, v in row.items():
                    out.add_entry(i, j, c * v)
        return out


class ActLeftResult:
    """Blocks of X (x) V over the group: block phi is the quotient of
    M (x) V by m·phi(a) (x) v - m (x) a·v, carrying the left action
    lam_M(phi(b))."""

    def __init__(self, M: Bimodule, V: LeftModule):
        act = M.act
        alg = act.algebra
        ctx = M.ctx
        one = ctx.one
        gens = alg.gen_indices
        lam_cols = {a: V.lam(a).transpose() for a in gens}
        v_ranges = [(0, V.dim)]
        blocks = []
        offset = 0
        for phi in act.group.elements:
            rho_cols = {a: M.rho_vec(act.apply(phi, {a: one})).transpose() for a in gens}
            blk = _TBlock()
            blk.psi = phi
            blk.offset = offset
            blk.slices = []
            blk.slice_map = {}
            for mi, (mlo, mhi) in enumerate(M.ranges):
                for ni, (nlo, nhi) in enumerate(v_ranges):
                    sl = _quotient_slice(ctx, gens, mlo, mhi, nlo, nhi,
                                         rho_cols, lam_cols, offset)
                    blk.slices.append(sl)
                    blk.slice_map[(mi, ni)] = sl
                    offset += len(sl.pairs)
            blk.dim = offset - blk.offset
            blocks.append(blk)
        self.M = M
        self.V = V
        self.act = act
        self.ctx = ctx
        self.dim = offset
        self.blocks = blocks
        self.block_by_psi = {b.psi: b for b in blocks}
        m_rid = [None] * M.dim
        for ri, (lo, hi) in enumerate(M.ranges):
            for k in range(lo, hi):
                m_rid[k] = ri
        self._m_rid = m_rid

    def P(self, phi, k, v) -> dict:
        blk = self.block_by_psi[phi]
        sl = blk.slice_map[(self._m_rid[k], 0)]
        pos = sl.pos.get((k, v))
        if pos is not None:
            return {pos: self.ctx.one}
        return sl.expand[(k, v)]

    def module(self) -> LeftModule:
        act = self.act
        one = self.ctx.one
        mats = {}
        for a in act.algebra.gen_indices:
            out = Mat(self.ctx, self.dim, self.dim)
            for blk in self.blocks:
                lt = self.M.lam_vec(act.apply(blk.psi, {a: one})).transpose()
                for sl in blk.slices:
                    for (i, j) in sl.pairs:
                        q = sl.pos[(i, j)]
                        col = lt.rows.get(i)
                        if not col:
                            continue
                        acc = {}
                        for k, c in col.items():
                            v_addmul(acc, c, self.P(blk.psi, k, j))
                        for r, v in acc.items():
                            out.add_entry(r, q, v)
            mats[a] = out
        return LeftModule(act, self.dim, mats, name=f"{self.M.name}(x){self.V.name}")

    def induced_idempotent(self, e: XMor) -> Mat:
        """The morphism tuple e of the bimodule induces a matrix on the sum of
        blocks: component e_gamma maps block phi to block phi*gamma."""
        G = self.act.group
        out = Mat(self.ctx, self.dim, self.dim)
        for gamma, m in e.comps.items():
            mt = m.transpose()
            for blk in self.blocks:
                alpha = G.op(blk.psi, gamma)
                for sl in blk.slices:
                    for (i, j) in sl.pairs:
                        q = sl.pos[(i, j)]
                        col = mt.rows.get(i)
                        if not col:
                            continue
                        acc = {}
                        for k, c in col.items():
                            v_addmul(acc, c, self.P(alpha, k, j))
                        for r, v in acc.items():
                            out.add_entry(r, q, v)
        return out


def x_act_left(M: Bimodule, V: LeftModule) -> ActLeftResult:
    return ActLeftResult(M, V)


def image_left_module(T: LeftModule, E: Mat, name="im") -> LeftModule:
    """Submodule spanned by the columns of an idempotent matrix."""
    ctx = T.ctx
    ech = Echelon(ctx)
    cols = E.transpose()
    for j in range(E.nc):
        col = cols.rows.get(j, {})
        ech.insert(col)
    basis = list(ech.rows)
    rank = len(basis)
    solver = Echelon(ctx, track=True)
    for b in basis:
        solver.insert(b)
    mats = {}
    for a in T.act.algebra.gen_indices:
        m = Mat(ctx, rank, rank)
        for q, b in enumerate(basis):
            img = T.lam(a).apply(b)
            combo = solver.solve(img)
            assert combo is not None, "idempotent image is not action-stable"
            for r, c in combo.items():
                m.add_entry(r, q, c)
        mats[a] = m
    return LeftModule(T.act, rank, mats, name=name)


def top_multiplicities(V: LeftModule) -> dict:
    """Dimension of e_i * (V / rad V) for each vertex i."""
    alg = V.act.algebra
    ctx = V.ctx
    rad = Echelon(ctx)
    for a in alg.arrow_basis:
        cols = V.lam(a).transpose()
        for j in range(V.dim):
            col = cols.rows.get(j)
            if col:
                rad.insert(col)
    out = {}
    for v in range(alg.nv):
        ei = V.lam(alg.idem[v])
        full = Echelon(ctx)
        cols = ei.transpose()
        for j in range(V.dim):
            col = cols.rows.get(j)
            if col:
                full.insert(col)
        sub = Echelon(ctx)
        for r in rad.rows:
            img = ei.apply(r)
            if img:
                sub.insert(img)
        out[v] = full.rank - sub.rank
    return out
