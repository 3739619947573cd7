"""Finite-dimensional basic algebras from quivers with relations, plus
finite abelian group actions on them.

Conventions (fixed across the package):
  * a path word lists arrows in traversal order, left to right;
  * the algebra product is function-style: (p*q) means "apply q, then p",
    so the word of p*q is word(q) + word(p);
  * hence A*e_i is spanned by paths with source i, and e_j*A by paths with
    target j.
Relations must be admissible (every term a path of length >= 2).
"""

from __future__ import annotations

from .linalg import Echelon, Mat, nullspace
from .scalars import FieldCtx


class PresentationError(ValueError):
    pass


class NotFiniteDimensional(PresentationError):
    pass


class ActionError(ValueError):
    pass


MAX_PATHS = 4096
MAX_LEN = 64


class Presentation:
    def __init__(self, ctx: FieldCtx, vertices, arrows, relations=None, truncate=None):
        self.ctx = ctx
        self.vertices = list(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise PresentationError("duplicate vertex names")
        vix = {v: i for i, v in enumerate(self.vertices)}
        self.arrows = []
        names = set(self.vertices)
        for name, s, t in arrows:
            if name in names:
                raise PresentationError(f"duplicate name {name!r}")
            names.add(name)
            if s not in vix or t not in vix:
                raise PresentationError(f"arrow {name!r} references unknown vertex")
            self.arrows.append((name, vix[s], vix[t]))
        self.relations = relations or []  # list of [(coeff, word-of-arrow-names)]
        self.truncate = truncate


def _word_endpoints(word, arrows):
    s = arrows[word[0]][1]
    t = arrows[word[0]][2]
    for a in word[1:]:
        if arrows[a][1] != t:
            return None
        t = arrows[a][2]
    return s, t


class Algebra:
    """Basic algebra with a path basis.

    basis keys: ("e", v) for the vertex idempotents, otherwise a tuple of
    arrow indices in traversal order.  In the presence of non-monomial
    relations the basis consists of the non-pivot paths of the relation
    row space; _rref_rows rewrites pivot paths.
    """

    def __init__(self, ctx, vertices, arrows, basis_keys, src, tgt, mult_pairs,
                 adjoined_vertex=None):
        self.ctx = ctx
        self.vertices = vertices
        self.nv = len(vertices)
        self.arrows = arrows
        self.basis_keys = basis_keys
        self.dim = len(basis_keys)
        self.src = src
        self.tgt = tgt
        self.length = [0 if k[0] == "e" else len(k) for k in basis_keys]
        self.mult_pairs = mult_pairs
        self.adjoined_vertex = adjoined_vertex
        self._bindex = {k: i for i, k in enumerate(basis_keys)}
        self.idem = [self._bindex[("e", v)] for v in range(self.nv)]
        one = ctx.one
        self.unit = {i: one for i in self.idem}
        self.arrow_basis = [self._bindex[(a,)] for a in range(len(arrows))
                            if (a,) in self._bindex]
        self.gen_indices = self.idem + self.arrow_basis
        self._blocks()
        self._frob = "?"
        self._lmats = {}
        self._rmats = {}

    # -- construction ------------------------------------------------------

    @classmethod
    def from_presentation(cls, pres: Presentation) -> "Algebra":
        arrows = pres.arrows
        rels = []
        for terms in pres.relations:
            out = []
            for coeff, wnames in terms:
                coeff = pres.ctx.scalar(coeff)
                if not coeff:
                    continue
                try:
                    word = tuple(next(i for i, a in enumerate(arrows) if a[0] == n)
                                 for n in wnames)
                except StopIteration:
                    raise PresentationError(f"unknown arrow in relation: {wnames}")
                if len(word) < 2:
                    raise PresentationError("relation terms must be paths of length >= 2")
                ends = _word_endpoints(word, arrows)
                if ends is None:
                    raise PresentationError(f"relation term is not a composable path: {wnames}")
                out.append((coeff, word, ends))
            if not out:
                continue
            e0 = out[0][2]
            if any(e[2] != e0 for e in out):
                raise PresentationError("relation terms must share source and target")
            rels.append(out)
        monomial = all(len(r) == 1 for r in rels)
        if monomial and pres.truncate is None:
            return cls._build_monomial(pres, rels)
        if pres.truncate is None:
            raise PresentationError("relations with several terms require truncate")
        return cls._build_truncated(pres, rels)

    @classmethod
    def _build_monomial(cls, pres, rels):
        ctx, arrows = pres.ctx, pres.arrows
        forbidden = [r[0][1] for r in rels]
        out_of = {}
        for i, (_, s, t) in enumerate(arrows):
            out_of.setdefault(s, []).append(i)

        def blocked(word):
            return any(len(f) <= len(word) and word[-len(f):] == f for f in forbidden)

        keys = [("e", v) for v in range(len(pres.vertices))]
        src = list(range(len(pres.vertices)))
        tgt = list(range(len(pres.vertices)))
        frontier = [((), v, v) for v in range(len(pres.vertices))]
        ln = 0
        while frontier:
            ln += 1
            if ln > MAX_LEN or len(keys) > MAX_PATHS:
                raise NotFiniteDimensional("path growth exceeds cap; algebra not finite-dimensional")
            nxt = []
            for word, ws, wt in frontier:
                for a in out_of.get(wt, ()):
                    w2 = word + (a,)
                    if blocked(w2):
                        continue
                    keys.append(w2)
                    src.append(ws)
                    tgt.append(arrows[a][2])
                    nxt.append((w2, ws, arrows[a][2]))
            frontier = nxt
        order = sorted(range(len(keys)), key=lambda i: _basis_sort_key(keys[i], src[i]))
        keys = [keys[i] for i in order]
        src = [src[i] for i in order]
        tgt = [tgt[i] for i in order]
        bindex = {k: i for i, k in enumerate(keys)}
        one = ctx.one
        mult = {}
        for i, ki in enumerate(keys):
            wi = () if ki[0] == "e" else ki
            for j, kj in enumerate(keys):
                if tgt[j] != src[i]:
                    continue
                wj = () if kj[0] == "e" else kj
                w = wj + wi
                key = ("e", src[j]) if not w else w
                r = bindex.get(key)
                if r is not None:
                    mult[(i, j)] = {r: one}
        return cls(ctx, pres.vertices, arrows, keys, src, tgt, mult)

    @classmethod
    def _build_truncated(cls, pres, rels):
        ctx, arrows, T = pres.ctx, pres.arrows, pres.truncate
        if T < 2:
            raise PresentationError("truncate must be >= 2")
        out_of = {}
        for i, (_, s, t) in enumerate(arrows):
            out_of.setdefault(s, []).append(i)
        # every path of length < T
        paths = [(("e", v), v, v) for v in range(len(pres.vertices))]
        frontier = [((), v, v) for v in range(len(pres.vertices))]
        for _ in range(T - 1):
            nxt = []
            for word, ws, wt in frontier:
                for a in out_of.get(wt, ()):
                    w2 = word + (a,)
                    paths.append((w2, ws, arrows[a][2]))
                    nxt.append((w2, ws, arrows[a][2]))
                    if len(paths) > MAX_PATHS:
                        raise NotFiniteDimensional("too many paths below truncation length")
            frontier = nxt
        paths.sort(key=lambda p: _basis_sort_key(p[0], p[1]))
        pindex = {p[0]: i for i, p in enumerate(paths)}
        by_src: dict = {}
        by_tgt: dict = {}
        for k, (key, s, t) in enumerate(paths):
            by_src.setdefault(s, []).append(k)
            by_tgt.setdefault(t, []).append(k)
        ech = Echelon(ctx)
        for terms in rels:
            rsrc, rtgt = terms[0][2]
            for u in by_src.get(rtgt, ()):  # left factor: applied after r
                ukey, _, _ = paths[u]
                uword = () if ukey[0] == "e" else ukey
                for v in by_tgt.get(rsrc, ()):  # right factor: applied before r
                    vkey, _, _ = paths[v]
                    vword = () if vkey[0] == "e" else vkey
                    vec = {}
                    for coeff, word, _ in terms:
                        w = vword + word + uword
                        if len(w) >= T:
                            continue
                        k = pindex[w]
                        c = vec.get(k)
                        c = coeff if c is None else c + coeff
                        if c:
                            vec[k] = c
                        else:
                            del vec[k]
                    if vec:
                        ech.insert(vec)
        pivots = set(ech.pivots)
        rref_by_pivot = {p: ech.rows[r] for p, r in ech.pivots.items()}
        keep = [k for k in range(len(paths)) if k not in pivots]
        remap = {k: i for i, k in enumerate(keep)}
        keys = [paths[k][0] for k in keep]
        src = [paths[k][1] for k in keep]
        tgt = [paths[k][2] for k in keep]

        def reduce_path(k):
            """Normal form of path #k over kept indices."""
            row = rref_by_pivot.get(k)
            if row is None:
                return {remap[k]: ctx.one}
            return {remap[f]: -c for f, c in row.items() if f != k}

        mult = {}
        for i, k_i in enumerate(keep):
            ki = paths[k_i][0]
            wi = () if ki[0] == "e" else ki
            for j, k_j in enumerate(keep):
                if tgt[j] != src[i]:
                    continue
                kj = paths[k_j][0]
                wj = () if kj[0] == "e" else kj
                w = wj + wi
                if len(w) >= T:
                    continue
                key = ("e", src[j]) if not w else w
                vec = reduce_path(pindex[key])
                if vec:
                    mult[(i, j)] = vec
        return cls(ctx, pres.vertices, arrows, keys, src, tgt, mult)

    # -- basic structure ---------------------------------------------------

    def _blocks(self):
        adj = {v: set() for v in range(self.nv)}
        for _, s, t in self.arrows:
            adj[s].add(t)
            adj[t].add(s)
        seen = set()
        blocks = []
        for v in range(self.nv):
            if v in seen:
                continue
            comp = []
            stack = [v]
            seen.add(v)
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            blocks.append(sorted(comp))
        self.blocks = blocks
        self.block_of = [None] * self.nv
        for b, comp in enumerate(blocks):
            for v in comp:
                self.block_of[v] = b

    def lmul(self, i: int, j: int) -> dict:
        return self.mult_pairs.get((i, j), {})

    def mult(self, x: dict, y: dict) -> dict:
        out = {}
        mp = self.mult_pairs
        for i, a in x.items():
            for j, b in y.items():
                vec = mp.get((i, j))
                if not vec:
                    continue
                c = a * b
                for k, v in vec.items():
                    s = out.get(k)
                    s = c * v if s is None else s + c * v
                    if s:
                        out[k] = s
                    else:
                        del out[k]
        return out

    def L(self, x: dict) -> Mat:
        """Left multiplication matrix on algebra coordinates."""
        m = Mat(self.ctx, self.dim, self.dim)
        for j in range(self.dim):
            for i, a in x.items():
                vec = self.mult_pairs.get((i, j))
                if vec:
                    for k, v in vec.items():
                        m.add_entry(k, j, a * v)
        return m

    def R(self, x: dict) -> Mat:
        m = Mat(self.ctx, self.dim, self.dim)
        for i in range(self.dim):
            for j, a in x.items():
                vec = self.mult_pairs.get((i, j))
                if vec:
                    for k, v in vec.items():
                        m.add_entry(k, i, a * v)
        return m

    def L_basis(self, i: int) -> Mat:
        m = self._lmats.get(i)
        if m is None:
            m = self.L({i: self.ctx.one})
            self._lmats[i] = m
        return m

    def R_basis(self, i: int) -> Mat:
        m = self._rmats.get(i)
        if m is None:
            m = self.R({i: self.ctx.one})
            self._rmats[i] = m
        return m

    def left_ideal(self, v: int):
        """Basis indices of A*e_v (paths with source v)."""
        return [i for i in range(self.dim) if self.src[i] == v]

    def right_ideal(self, v: int):
        """Basis indices of e_v*A (paths with target v)."""
        return [i for i in range(self.dim) if self.tgt[i] == v]

    def peirce(self, i: int, j: int):
        """Basis indices of e_i*A*e_j."""
        return [k for k in range(self.dim) if self.tgt[k] == i and self.src[k] == j]

    def cartan(self):
        return [[len(self.peirce(i, j)) for j in range(self.nv)] for i in range(self.nv)]

    def radical_indices(self):
        return [i for i in range(self.dim) if self.length[i] >= 1]

    def element_from_word(self, word) -> dict:
        """Algebra element of an arrow-index word (traversal order)."""
        if not word:
            raise ValueError("empty word needs a vertex; use idem")
        ends = _word_endpoints(word, self.arrows)
        if ends is None:
            return {}
        key = word
        i = self._bindex.get(key)
        if i is not None:
            return {i: self.ctx.one}
        # not a basis path: multiply it out
        vec = {self.idem[ends[0]]: self.ctx.one}
        for a in word:
            ai = self._bindex.get((a,))
            if ai is None:
                return {}
            vec = self.mult({ai: self.ctx.one}, vec)
            if not vec:
                return {}
        return vec

    def label(self, i: int) -> str:
        k = self.basis_keys[i]
        if k[0] == "e":
            return f"e{self.vertices[k[1]]}"
        return "*".join(self.arrows[a][0] for a in k)

    def render_element(self, vec: dict) -> str:
        if not vec:
            return "0"
        parts = []
        for i in sorted(vec):
            c = vec[i]
            cs = c.render()
            lbl = self.label(i)
            if cs == "1":
                parts.append(lbl)
            elif cs == "-1":
                parts.append(f"-{lbl}")
            elif " " in cs:
                parts.append(f"({cs})*{lbl}")
            else:
                parts.append(f"{cs}*{lbl}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    # -- self-injectivity and the dual-basis pairing ------------------------

    def frobenius(self):
        """FrobeniusData if the algebra admits our socle-indicator form, else None."""
        if self._frob != "?":
            return self._frob
        self._frob = self._compute_frobenius()
        return self._frob

    def _compute_frobenius(self):
        socvecs = []
        sigma = {}
        for v in range(self.nv):
            sub = self.left_ideal(v)
            pos = {b: p for p, b in enumerate(sub)}
            rows = []
            for a in self.arrow_basis:
                cols = {}
                for p, b in enumerate(sub):
                    vec = self.mult_pairs.get((a, b))
                    if vec:
                        for k, c in vec.items():
                            cols.setdefault(k, {})[p] = c
                rows.extend(cols.values())
            ker = nullspace(rows, len(sub), self.ctx)
            if len(ker) != 1:
                return None
            vec = {sub[p]: c for p, c in ker[0].items()}
            lead = min(vec)
            vec = {k: c / vec[lead] for k, c in vec.items()}
            tv = {self.tgt[k] for k in vec}
            if len(tv) != 1:
                return None
            socvecs.append((v, lead, vec))
            sigma[v] = tv.pop()
        if len(set(sigma.values())) != self.nv:
            return None
        t = {lead: self.ctx.one for _, lead, _ in socvecs}
        gram = Mat(self.ctx, self.dim, self.dim)
        for p in range(self.dim):
            for q in range(self.dim):
                vec = self.mult_pairs.get((p, q))
                if vec:
                    s = None
                    for k, c in vec.items():
                        tc = t.get(k)
                        if tc is not None:
                            s = c * tc if s is None else s + c * tc
                    if s:
                        gram.add_entry(p, q, s)
        try:
            ginv = gram.inverse()
        except ZeroDivisionError:
            return None
        nu = tuple(next(i for i in range(self.nv) if sigma[i] == j) for j in range(self.nv))
        right_dual = []
        left_dual = []
        for q in range(self.dim):
            right_dual.append({r: ginv.entry(r, q) for r in range(self.dim) if ginv.entry(r, q)})
            left_dual.append({r: ginv.entry(q, r) for r in range(self.dim) if ginv.entry(q, r)})
        soc = {v: vec for v, _, vec in socvecs}
        return FrobeniusData(nu, t, right_dual, left_dual, soc)

    def is_self_injective(self) -> bool:
        return self.frobenius() is not None

    def is_weakly_symmetric(self) -> bool:
        f = self.frobenius()
        return f is not None and f.nu == tuple(range(self.nv))


class FrobeniusData:
    """Nakayama vertex permutation and dual bases of a Frobenius form t.

    nu[j] = i means nu(e_j) = e_i.  right_dual[q] satisfies
    t(b_p * right_dual[q]) = delta(p,q); left_dual[q] satisfies
    t(left_dual[q] * b_p) = delta(q,p).  soc[v] spans the socle of A*e_v,
    normalised to 1 on its leading coordinate.
    """

    def __init__(self, nu, t, right_dual, left_dual, soc):
        self.nu = nu
        self.t = t
        self.right_dual = right_dual
        self.left_dual = left_dual
        self.soc = soc

    def t_value(self, vec: dict):
        s = None
        for k, c in vec.items():
            tc = self.t.get(k)
            if tc is not None:
                s = c * tc if s is None else s + c * tc
        return s


def _basis_sort_key(key, srcv):
    if key[0] == "e":
        return (0, key[1], ())
    return (len(key), srcv, key)


class StructAlgebra:
    """Unital algebra given by structure constants on an abstract basis."""

    def __init__(self, ctx, dim, table, unit):
        self.ctx = ctx
        self.dim = dim
        self.table = table  # (i, j) -> SpVec, missing = 0
        self.unit = unit

    def mult(self, x: dict, y: dict) -> dict:
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                vec = self.table.get((i, j))
                if not vec:
                    continue
                c = a * b
                for k, v in vec.items():
                    s = out.get(k)
                    s = c * v if s is None else s + c * v
                    if s:
                        out[k] = s
                    else:
                        del out[k]
        return out

    def radical_basis(self):
        """Jacobson radical over a characteristic-zero field: x is radical
        iff trace(L_{x b}) = 0 for every basis element b."""
        trL = []
        for l in range(self.dim):
            s = self.ctx.zero
            for k in range(self.dim):
                vec = self.table.get((l, k))
                if vec:
                    c = vec.get(k)
                    if c is not None:
                        s = s + c
            trL.append(s)
        rows = []
        for i in range(self.dim):
            row = {}
            for j in range(self.dim):
                vec = self.table.get((j, i))
                if vec:
                    s = None
                    for l, c in vec.items():
                        if trL[l]:
                            s = c * trL[l] if s is None else s + c * trL[l]
                    if s:
                        row[j] = s
            rows.append(row)
        return nullspace(rows, self.dim, self.ctx)

    def radical_dim(self) -> int:
        return len(self.radical_basis())


class GroupAction:
    """Action of a finite abelian group on an algebra by automorphisms that
    permute the vertex idempotents."""

    def __init__(self, algebra: Algebra, group, mats: dict):
        self.algebra = algebra
        self.group = group
        self.mats = mats
        self.vperm = {}
        for g, m in mats.items():
            perm = []
            for v in range(algebra.nv):
                img = m.apply({algebra.idem[v]: algebra.ctx.one})
                if len(img) != 1:
                    raise ActionError("action does not permute the vertex idempotents")
                (k, c), = img.items()
                if c != 1 or algebra.basis_keys[k][0] != "e":
                    raise ActionError("action does not permute the vertex idempotents")
                perm.append(algebra.basis_keys[k][1])
            if sorted(perm) != list(range(algebra.nv)):
                raise ActionError("idempotent image map is not a permutation")
            self.vperm[g] = tuple(perm)

    def apply(self, g, vec: dict) -> dict:
        return self.mats[g].apply(vec)

    def vertex_image(self, g, v: int) -> int:
        return self.vperm[g][v]

    def stab_vertex(self, v: int):
        return tuple(g for g in self.group.elements if self.vperm[g][v] == v)

    def stab_pair(self, i: int, j: int):
        return tuple(g for g in self.group.elements
                     if self.vperm[g][i] == i and self.vperm[g][j] == j)

    def orbit_pair(self, i: int, j: int):
        return tuple(sorted({(self.vperm[g][i], self.vperm[g][j]) for g in self.group.elements}))

    def orbit_vertex(self, i: int):
        return tuple(sorted({self.vperm[g][i] for g in self.group.elements}))


def build_action(algebra: Algebra, group, gen_images, faithful=True) -> GroupAction:
    """gen_images: one dict per group generator mapping generator names
    ("e<vertex>" or an arrow name) to algebra elements (SpVec)."""
    ctx = algebra.ctx
    gens = group.generators()
    if len(gen_images) != len(gens):
        raise ActionError(f"need {len(gens)} generator image maps, got {len(gen_images)}")
    name_to_gen = {}
    for v in range(algebra.nv):
        name_to_gen[f"e{algebra.vertices[v]}"] = ("v", v)
    for ai, (name, _, _) in enumerate(algebra.arrows):
        if name in name_to_gen:
            raise ActionError(f"ambiguous generator name {name!r}")
        name_to_gen[name] = ("a", ai)
    gen_mats = []
    for pos, images in enumerate(gen_images):
        imap = {}
        for name, vec in images.items():
            if name not in name_to_gen:
                raise ActionError(f"unknown generator {name!r} in action map")
            imap[name_to_gen[name]] = {k: ctx.scalar(c) for k, c in vec.items() if ctx.scalar(c)}
        missing = [n for n, k in name_to_gen.items() if k not in imap]
        if missing:
            raise ActionError(f"action map missing images for {sorted(missing)}")
        gen_mats.append(_automorphism_matrix(algebra, imap))
    # generator orders and commutation
    iden = Mat.identity(ctx, algebra.dim)
    for m, n in zip(gen_mats, group.orders):
        p = iden
        for _ in range(n):
            p = m.mul(p)
        if p != iden:
            raise ActionError("generator image does not have the declared order")
    for i in range(len(gen_mats)):
        for j in range(i + 1, len(gen_mats)):
            if gen_mats[i].mul(gen_mats[j]) != gen_mats[j].mul(gen_mats[i]):
                raise ActionError("generator images do not commute")
    mats = {}
    for g in group.elements:
        m = iden
        for mat, k in zip(gen_mats, g):
            for _ in range(k):
                m = mat.mul(m)
        mats[g] = m
    if faithful and len({_mat_key(m) for m in mats.values()}) != group.order:
        raise ActionError("action is not faithful")
    return GroupAction(algebra, group, mats)


def _mat_key(m: Mat):
    return tuple(sorted((i, j, v.c) for i, r in m.rows.items() for j, v in r.items()))


def _automorphism_matrix(algebra: Algebra, imap) -> Mat:
    ctx = algebra.ctx
    # idempotent images must be single idempotents
    vimg = {}
    for v in range(algebra.nv):
        vec = imap[("v", v)]
        if len(vec) != 1:
            raise ActionError("idempotent image must be a single vertex idempotent")
        (k, c), = vec.items()
        key = algebra.basis_keys[k]
        if key[0] != "e" or c != 1:
            raise ActionError("idempotent image must be a single vertex idempotent")
        vimg[v] = key[1]
    if sorted(vimg.values()) != list(range(algebra.nv)):
        raise ActionError("idempotent images are not a permutation")
    aimg = {}
    for ai, (_, s, t) in enumerate(algebra.arrows):
        vec = imap[("a", ai)]
        for k in vec:
            if algebra.length[k] < 1:
                raise ActionError("arrow image has a degree-zero term")
            if algebra.src[k] != vimg[s] or algebra.tgt[k] != vimg[t]:
                raise ActionError("arrow image endpoints do not match the vertex permutation")
        aimg[ai] = vec
    m = Mat(algebra.ctx, algebra.dim, algebra.dim)
    for bi, key in enumerate(algebra.basis_keys):
        if key[0] == "e":
            m.add_entry(algebra.idem[vimg[key[1]]], bi, ctx.one)
            continue
        vec = {algebra.idem[vimg[algebra.src[bi]]]: ctx.one}
        for a in key:  # traversal order: multiply on the left in turn
            vec = algebra.mult(aimg[a], vec)
            if not vec:
                break
        for k, c in vec.items():
            m.add_entry(k, bi, c)
    # multiplicativity and bijectivity
    if m.rank() != algebra.dim:
        raise ActionError("generator image is not bijective")
    for i in range(algebra.dim):
        xi = m.apply({i: ctx.one})
        for j in range(algebra.dim):
            lhs = m.apply(algebra.mult_pairs.get((i, j), {}))
            rhs = algebra.mult(xi, m.apply({j: ctx.one}))
            if lhs != rhs:
                raise ActionError("generator image is not multiplicative "
                                  f"on basis pair ({algebra.label(i)}, {algebra.label(j)})")
    return m


def adjoin_point(action: GroupAction):
    """Extend the algebra by an isolated vertex carrying the trivial action.

    Returns the extended GroupAction; old basis indices are preserved and the
    new idempotent sits at the last index.
    """
    A = action.algebra
    name = "pt"
    while name in A.vertices:
        name += "_"
    vertices = A.vertices + [name]
    keys = A.basis_keys + [("e", A.nv)]
    src = A.src + [A.nv]
    tgt = A.tgt + [A.nv]
    d = A.dim
    mult = dict(A.mult_pairs)
    mult[(d, d)] = {d: A.ctx.one}
    B = Algebra(A.ctx, vertices, A.arrows, keys, src, tgt, mult, adjoined_vertex=A.nv)
    mats = {}
    for g, m in action.mats.items():
        m2 = m.copy()
        m2.nr = m2.nc = d + 1
        m2.add_entry(d, d, A.ctx.one)
        mats[g] = m2
    return GroupAction(B, action.group, mats)
