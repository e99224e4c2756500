"""Finite group schemes as dual pairs (k[G], O(G)) plus the subgroup-scheme
machinery: normality, centralizing, quotients, colinear sections, cleaving
maps, adjoint actions, and products/intersections of subgroups.

The coordinate algebra is always the literal dual of the group algebra in the
dual basis, so the perfect pairing is the identity matrix and transposition
implements duality on maps.
"""

from __future__ import annotations

import itertools

from .errors import (
    CharZero,
    ClosureNotHopf,
    DimensionMismatch,
    FieldMismatch,
    NoInvertibleSectionFound,
    NoSolution,
    NotAGroup,
    NotInvertible,
    NotNormal,
    NotRestrictedLie,
    VerificationFailure,
)
from .fields import binomial
from .hopf import (
    HopfAlgebra,
    LinMap,
    convolution,
    convolution_inverse,
    convolution_unit,
    dual_hopf,
    grouplikes,
    identity_map,
    is_hopf_morphism,
    t2_axpy,
    t2_outer,
    tensor_hopf,
    verify_hopf,
)
from .linalg import (
    Echelon,
    annihilator,
    mat_apply,
    mat_compose,
    mat_identity,
    mat_transpose,
    solve_rows,
    span,
    subspace_intersection,
    unit_vec,
    v_axpy,
    v_scale,
    v_sub,
    echelon_points_guard,
)


class GroupScheme:
    """A finite group scheme: cocommutative k[G] with O(G) its dual.

    ``order_connected`` and ``order_points`` record |G?| and |G(k)| when the
    constructor knows them structurally (constant, infinitesimal, products).
    """

    def __init__(self, group_algebra: HopfAlgebra, kind="generic", payload=None,
                 order_connected=None, order_points=None, name=""):
        self.group_algebra = group_algebra
        self.coordinate_algebra = dual_hopf(group_algebra)
        self.kind = kind
        self.payload = payload
        self.order_connected = order_connected
        self.order_points = order_points
        self.name = name or group_algebra.name
        if name and not group_algebra.name:
            group_algebra.name = f"k[{name}]"
            self.coordinate_algebra.name = f"O({name})"
        self.field = group_algebra.field

    @property
    def order(self):
        return self.group_algebra.dim

    def pairing_matrix(self):
        return mat_identity(self.order, self.field)

    def __repr__(self):
        return f"GroupScheme({self.name or 'order %d' % self.order})"

    def points_order(self, budget=10**7):
        """|G(k)|, structurally when known, else by counting grouplikes of k[G]."""
        if self.order_points is None:
            self.order_points = len(grouplikes(self.group_algebra, budget))
            self.order_connected = self.order // self.order_points
        return self.order_points

    def connected_order(self, budget=10**7):
        if self.order_connected is None:
            self.points_order(budget)
        return self.order_connected


def _check_group_table(table):
    n = len(table)
    for row in table:
        if len(row) != n or any(not (0 <= x < n) for x in row):
            raise NotAGroup("table is not square over valid indices")
    ident = None
    for e in range(n):
        if all(table[e][x] == x and table[x][e] == x for x in range(n)):
            ident = e
            break
    if ident is None:
        raise NotAGroup("no identity element")
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if table[table[a][b]][c] != table[a][table[b][c]]:
                    raise NotAGroup(f"associativity fails at ({a},{b},{c})")
    inv = [None] * n
    for a in range(n):
        for b in range(n):
            if table[a][b] == ident and table[b][a] == ident:
                inv[a] = b
        if inv[a] is None:
            raise NotAGroup(f"element {a} has no inverse")
    return ident, inv


def constant_group(elements, table, field, name="") -> GroupScheme:
    """The constant group scheme of a finite group given by its Cayley table.

    k[G] is the group algebra on the element basis; O(G) is spanned by the
    delta functions with pointwise product.
    """
    ident, inv = _check_group_table(table)
    n = len(elements)
    F = field
    one = F.one()
    mult = {(i, j): {table[i][j]: one} for i in range(n) for j in range(n)}
    unit = {ident: one}
    comult = {i: {(i, i): one} for i in range(n)}
    counit = {i: one for i in range(n)}
    antipode = {i: {inv[i]: one} for i in range(n)}
    kG = HopfAlgebra(F, list(elements), mult, unit, comult, counit, antipode,
                     name=f"k[{name}]" if name else "")
    return GroupScheme(kG, kind="constant",
                       payload={"table": [list(r) for r in table],
                                "identity": ident, "inverse": inv},
                       order_connected=1, order_points=n, name=name)


def ga_kernel(r: int, field, name="") -> GroupScheme:
    """The r-th Frobenius kernel of the additive group.

    O = k[t]/(t^(p^r)) with t primitive; the dual basis multiplies by binomial
    coefficients (Lucas pattern) and has the divided-power coproduct.
    """
    p = field.char
    if p == 0:
        raise CharZero("Frobenius kernels need positive characteristic")
    q = p**r
    F = field
    one = F.one()
    mult = {}
    for m in range(q):
        for n_ in range(q):
            if m + n_ < q:
                c = binomial(m + n_, m, F).value
                if c != F.zero():
                    mult[(m, n_)] = {m + n_: c}
    unit = {0: one}
    comult = {n_: {(a, n_ - a): one for a in range(n_ + 1)} for n_ in range(q)}
    counit = {0: one}
    antipode = {}
    for n_ in range(q):
        c = one if n_ % 2 == 0 else F.neg(one)
        antipode[n_] = {n_: c}
    labels = [f"d{n_}" for n_ in range(q)]
    nm = name or f"Ga_{r}"
    kG = HopfAlgebra(F, labels, mult, unit, comult, counit, antipode, name=f"k[{nm}]")
    return GroupScheme(kG, kind="ga", payload={"r": r},
                       order_connected=q, order_points=1, name=nm)


def mu_p_kernel(field, name="") -> GroupScheme:
    """The first Frobenius kernel of the multiplicative group.

    O = k[s]/(s^p - 1) with s grouplike; the dual is the algebra of p
    orthogonal idempotent projections.
    """
    p = field.char
    if p == 0:
        raise CharZero("mu_p needs positive characteristic")
    F = field
    one = F.one()
    # group algebra side: dual of k[s]/(s^p - 1); e_i are idempotents
    mult = {(i, j): {i: one} for i in range(p) for j in range(p) if i == j}
    unit = {i: one for i in range(p)}
    comult = {i: {(j, (i - j) % p): one for j in range(p)} for i in range(p)}
    counit = {0: one}
    antipode = {i: {(-i) % p: one} for i in range(p)}
    labels = [f"e{i}" for i in range(p)]
    nm = name or "mu_p"
    kG = HopfAlgebra(F, labels, mult, unit, comult, counit, antipode, name=f"k[{nm}]")
    return GroupScheme(kG, kind="mu_p", payload={},
                       order_connected=p, order_points=1, name=nm)


def direct_product(G1: GroupScheme, G2: GroupScheme, name="") -> GroupScheme:
    if G1.field != G2.field:
        raise FieldMismatch("factors over different fields")
    kG = tensor_hopf(G1.group_algebra, G2.group_algebra)
    oc = op = None
    if G1.order_connected is not None and G2.order_connected is not None:
        oc = G1.order_connected * G2.order_connected
        op = G1.order_points * G2.order_points
    nm = name or f"{G1.name}x{G2.name}"
    kG.name = f"k[{nm}]"
    return GroupScheme(kG, kind="product", payload={"factors": (G1, G2)},
                       order_connected=oc, order_points=op, name=nm)


def _gen_labels(n):
    base = "xyzw"
    return [base[i] if n <= 4 else f"x{i}" for i in range(n)]


def restricted_enveloping(n: int, bracket, p_map, field, name="") -> GroupScheme:
    """u^[p] of a restricted Lie algebra, on the PBW basis of exponents < p.

    ``bracket[i][j]`` and ``p_map[i]`` are coefficient dicts over the
    generators.  Straightening moves generators into sorted order with bracket
    corrections and reduces p-th powers through the p-map.  Antisymmetry and
    the Jacobi identity are checked up front; a p-map incompatible with the
    bracket makes the straightened product non-associative, which the final
    axiom sweep detects.
    """
    p = field.char
    if p == 0:
        raise CharZero("restricted enveloping algebras need characteristic p > 0")
    F = field
    one = F.one()
    zero = F.zero()

    def brk(i, j):
        return {g: F.from_int(c) if isinstance(c, int) else c
                for g, c in bracket[i][j].items()}

    for i in range(n):
        if brk(i, i):
            raise NotRestrictedLie(f"[x{i},x{i}] != 0")
        for j in range(n):
            lhs = brk(i, j)
            rhs = {g: F.neg(c) for g, c in brk(j, i).items()}
            if lhs != rhs:
                raise NotRestrictedLie(f"bracket not antisymmetric at ({i},{j})")

    def brk_vec(v, w):
        out = {}
        for i, a in v.items():
            for j, b in w.items():
                v_axpy(F, out, F.mul(a, b), brk(i, j))
        return out

    for i in range(n):
        for j in range(n):
            for k in range(n):
                acc = {}
                v_axpy(F, acc, one, brk_vec({i: one}, brk(j, k)))
                v_axpy(F, acc, one, brk_vec({j: one}, brk(k, i)))
                v_axpy(F, acc, one, brk_vec({k: one}, brk(i, j)))
                if acc:
                    raise NotRestrictedLie(f"Jacobi fails at ({i},{j},{k})")

    pmap = [
        {g: F.from_int(c) if isinstance(c, int) else c for g, c in p_map[i].items()}
        for i in range(n)
    ]

    exponents = list(itertools.product(range(p), repeat=n))
    index = {e: i for i, e in enumerate(exponents)}
    dim = p**n

    def word_of(exp):
        w = []
        for g, a in enumerate(exp):
            w.extend([g] * a)
        return tuple(w)

    memo = {}

    def normalize(word):
        """The PBW expansion of a generator word as Vec over monomial indices."""
        if word in memo:
            return memo[word]
        # first descent
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            if a > b:
                out = {}
                swapped = word[:i] + (b, a) + word[i + 2:]
                v_axpy(F, out, one, normalize(swapped))
                for g, c in brk(a, b).items():
                    rest = word[:i] + (g,) + word[i + 2:]
                    v_axpy(F, out, c, normalize(rest))
                memo[word] = out
                return out
        # sorted; reduce p-th powers
        for i in range(len(word) - p + 1):
            if len(set(word[i:i + p])) == 1:
                g = word[i]
                out = {}
                for h, c in pmap[g].items():
                    rest = word[:i] + (h,) + word[i + p:]
                    v_axpy(F, out, c, normalize(rest))
                memo[word] = out
                return out
        exp = [0] * n
        for g in word:
            exp[g] += 1
        out = {index[tuple(exp)]: one}
        memo[word] = out
        return out

    mult = {}
    for e1 in exponents:
        for e2 in exponents:
            prod = normalize(word_of(e1) + word_of(e2))
            if prod:
                mult[(index[e1], index[e2])] = prod

    glabels = _gen_labels(n)

    def label(exp):
        parts = [
            (glabels[g] if a == 1 else f"{glabels[g]}^{a}")
            for g, a in enumerate(exp)
            if a
        ]
        return "*".join(parts) if parts else "1"

    unit = {index[(0,) * n]: one}
    comult = {}
    for e in exponents:
        t = {}
        for sub in itertools.product(*(range(a + 1) for a in e)):
            c = one
            for ai, bi in zip(e, sub):
                c = F.mul(c, binomial(ai, bi, F).value)
            if c != zero:
                rest = tuple(a - b for a, b in zip(e, sub))
                t[(index[sub], index[rest])] = c
        comult[index[e]] = t
    counit = {index[(0,) * n]: one}
    antipode = {}
    for e in exponents:
        sign = one if sum(e) % 2 == 0 else F.neg(one)
        rev = tuple(reversed(word_of(e)))
        col = v_scale(F, sign, normalize(rev))
        if col:
            antipode[index[e]] = col

    nm = name or f"u(g{n})"
    kG = HopfAlgebra(F, [label(e) for e in exponents], mult, unit, comult,
                     counit, antipode, name=f"k[{nm}]")
    rep = verify_hopf(kG)
    if not rep.ok:
        raise NotRestrictedLie(
            "p-map incompatible with bracket: " + "; ".join(
                f"{nm_} at {w}" for nm_, w in rep.failures())
        )
    return GroupScheme(kG, kind="restricted_lie",
                       payload={"n": n, "bracket": bracket, "p_map": p_map},
                       order_connected=dim, order_points=1, name=nm)


# -- adjoint and coadjoint actions ----------------------------------------


def ad_r(G: GroupScheme, u, w):
    """ad_r(u)(w) = S(u_1) w u_2 in k[G]."""
    H = G.group_algebra
    F = G.field
    out = {}
    for (j, k), c in H.coproduct(u).items():
        sj = H.antipode_of(unit_vec(j, F))
        v_axpy(F, out, c, H.product(H.product(sj, w), unit_vec(k, F)))
    return out


def ad_l(G: GroupScheme, u, w):
    """ad_l(u)(w) = u_1 w S(u_2) in k[G]."""
    H = G.group_algebra
    F = G.field
    out = {}
    for (j, k), c in H.coproduct(u).items():
        sk = H.antipode_of(unit_vec(k, F))
        v_axpy(F, out, c, H.product(H.product(unit_vec(j, F), w), sk))
    return out


def coadjoint_matrices(G: GroupScheme):
    """For each basis u_i of k[G], the matrix of u_i ->> (-) on O(G), where
    u ->> b = <S(b_1) b_3, u> b_2.  Uses the identity pairing of dual bases."""
    O = G.coordinate_algebra
    F = G.field
    n = G.order
    mats = [dict() for _ in range(n)]
    for b in range(n):
        for (x, y, z), c in O.delta2(unit_vec(b, F)).items():
            w = O.product(O.antipode_of(unit_vec(x, F)), unit_vec(z, F))
            for i, wi in w.items():
                coef = F.mul(c, wi)
                if coef != F.zero():
                    col = mats[i].setdefault(b, {})
                    v_axpy(F, col, coef, unit_vec(y, F))
    for m in mats:
        for b in [b for b, col in m.items() if not col]:
            del m[b]
    return mats


def coadjoint_apply(G, coad_mats, u, b_vec):
    F = G.field
    out = {}
    for i, c in u.items():
        v_axpy(F, out, c, mat_apply(F, coad_mats[i], b_vec))
    return out


# -- subgroup schemes -------------------------------------------------------


class SubgroupScheme:
    """A closed subgroup scheme, carried as (iota: k[L] -> k[G], q = iota^T)."""

    def __init__(self, ambient: GroupScheme, own: GroupScheme, iota: LinMap,
                 subspace: Echelon, tag=("generic",)):
        self.ambient = ambient
        self.own = own
        self.iota = iota
        self.q = LinMap(ambient.coordinate_algebra, own.coordinate_algebra,
                        mat_transpose(iota.mat))
        self.subspace = subspace
        self.tag = tag

    @property
    def order(self):
        return self.own.order

    def key(self):
        return self.subspace.key()

    def contains_subgroup(self, other: "SubgroupScheme"):
        return all(self.subspace.contains(r) for r in other.subspace.basis())

    def __eq__(self, other):
        return isinstance(other, SubgroupScheme) and self.key() == other.key() \
            and self.ambient is other.ambient

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"SubgroupScheme(order {self.order} in {self.ambient.name})"


def _extract_sub_hopf(G: GroupScheme, ech: Echelon, name=""):
    """Structure constants of the Hopf subalgebra spanned by ech, in its
    canonical (RREF) basis.  Raises ClosureNotHopf when the span is not
    actually closed."""
    H = G.group_algebra
    F = G.field
    pivots = ech.pivots()
    m = len(pivots)
    rows = [ech.rows[p] for p in pivots]

    def coords(v):
        c = ech.coordinates(v)
        if c is None:
            raise ClosureNotHopf("span not multiplicatively closed")
        return {r: x for r, x in enumerate(c) if x != F.zero()}

    mult = {}
    for r in range(m):
        for s in range(m):
            cell = coords(H.product(rows[r], rows[s]))
            if cell:
                mult[(r, s)] = cell
    unit = coords(H.unit)
    comult = {}
    for r in range(m):
        grid = H.coproduct(rows[r])
        t = {}
        for (a, b) in itertools.product(pivots, repeat=2):
            c = grid.get((a, b))
            if c is not None:
                t[(pivots.index(a), pivots.index(b))] = c
        rebuilt = {}
        for (i, j), c in t.items():
            t2_axpy(F, rebuilt, c, t2_outer(F, rows[i], rows[j]))
        if rebuilt != grid:
            raise ClosureNotHopf("span is not a subcoalgebra")
        comult[r] = t
    counit = {}
    for r in range(m):
        c = H.counit_of(rows[r])
        if c != F.zero():
            counit[r] = c
    antipode = {}
    for r in range(m):
        col = coords(H.antipode_of(rows[r]))
        if col:
            antipode[r] = col

    labels = []
    for r, p in enumerate(pivots):
        row = rows[r]
        if row == unit_vec(p, F):
            labels.append(H.labels[p])
        else:
            labels.append(f"b{r}")
    return HopfAlgebra(F, labels, mult, unit, comult, counit, antipode,
                       name=name), pivots, rows


def _sub_connectivity(G: GroupScheme, dim: int):
    if G.order_points == 1:
        return dim, 1
    if G.order_connected == 1:
        return 1, dim
    return None, None


def subgroup_from_subspace(G: GroupScheme, ech: Echelon, tag=("generic",),
                           name="") -> SubgroupScheme:
    kL, pivots, rows = _extract_sub_hopf(G, ech, name=f"k[{name}]" if name else "")
    rep = verify_hopf(kL)
    if not rep.ok:
        raise ClosureNotHopf("extracted span violates Hopf axioms: "
                             + "; ".join(n for n, _ in rep.failures()))
    iota = LinMap(kL, G.group_algebra, {r: dict(rows[r]) for r in range(len(rows))})
    ok, wit = is_hopf_morphism(iota)
    if not ok:
        raise ClosureNotHopf(f"inclusion is not a Hopf morphism: {wit}")
    oc, op = _sub_connectivity(G, kL.dim)
    own = GroupScheme(kL, kind="derived", payload={"ambient": G},
                      order_connected=oc, order_points=op, name=name)
    return SubgroupScheme(G, own, iota, ech, tag=tag)


def subgroup_from_generators(G: GroupScheme, generators, name="") -> SubgroupScheme:
    """Smallest subgroup scheme whose group algebra contains the generators:
    close the span of {1} + generators under products, antipode, and
    coproduct slices."""
    H = G.group_algebra
    F = G.field
    n = G.order
    ech = Echelon(F, n)
    members = []

    def insert(v):
        if v and ech.insert(v):
            members.append(dict(v))
            return True
        return False

    insert(dict(H.unit))
    for g in generators:
        insert(dict(g))
    grew = True
    while grew:
        grew = False
        snapshot = list(members)
        for v in snapshot:
            if insert(H.antipode_of(v)):
                grew = True
            grid = H.coproduct(v)
            left, right = {}, {}
            for (a, b), c in grid.items():
                d = left.setdefault(a, {})
                v_axpy(F, d, c, unit_vec(b, F))
                d2 = right.setdefault(b, {})
                v_axpy(F, d2, c, unit_vec(a, F))
            for sl in list(left.values()) + list(right.values()):
                if insert(sl):
                    grew = True
        snapshot = list(members)
        for v in snapshot:
            for w in snapshot:
                if insert(H.product(v, w)):
                    grew = True
    tag = ("generic",)
    if ech.dim == 1:
        tag = ("trivial",)
    elif ech.dim == n:
        tag = ("full",)
    return subgroup_from_subspace(G, ech, tag=tag, name=name)


def trivial_subgroup(G: GroupScheme) -> SubgroupScheme:
    return subgroup_from_generators(G, [], name="1")


def full_subgroup(G: GroupScheme) -> SubgroupScheme:
    e = span(G.field, G.order, [unit_vec(i, G.field) for i in range(G.order)])
    return subgroup_from_subspace(G, e, tag=("full",), name=G.name)


def ga_frobenius_subgroup(G: GroupScheme, s: int) -> SubgroupScheme:
    """The standard order-p^s Frobenius kernel inside a ga_kernel(r) ambient."""
    if G.kind != "ga":
        raise DimensionMismatch("frobenius_sub needs a ga_kernel ambient")
    p = G.field.char
    e = span(G.field, G.order, [unit_vec(i, G.field) for i in range(p**s)])
    sub = subgroup_from_subspace(G, e, tag=("ga_standard", s), name=f"Ga_{s}")
    return sub


def is_normal(L: SubgroupScheme) -> bool:
    G = L.ambient
    F = G.field
    for i in range(G.order):
        u = unit_vec(i, F)
        for row in L.subspace.basis():
            if not L.subspace.contains(ad_r(G, u, row)):
                return False
    return True


def centralize(H: SubgroupScheme, K: SubgroupScheme) -> bool:
    G = H.ambient
    kg = G.group_algebra
    for v in H.subspace.basis():
        for w in K.subspace.basis():
            if kg.product(v, w) != kg.product(w, v):
                return False
    return True


# -- quotients, sections, cleavings ----------------------------------------


class Quotient:
    """k[G/H] with the canonical projection pi and the coinvariant model of
    O(G/H) inside O(G)."""

    def __init__(self, G, H_sub, hopf, pi, rep_indices, coinvariants):
        self.G = G
        self.H = H_sub
        self.hopf = hopf
        self.pi = pi
        self.rep_indices = rep_indices
        self.coinvariants = coinvariants

    @property
    def index(self):
        return self.hopf.dim


def augmentation_ideal_basis(sub: SubgroupScheme):
    """Basis of k[H]^+ = k[H] meet ker(counit), inside the ambient algebra."""
    G = sub.ambient
    F = G.field
    rows = sub.subspace.basis()
    coeffs = {r: G.group_algebra.counit_of(row) for r, row in enumerate(rows)}
    sys_rows = [({r: c for r, c in coeffs.items() if c != F.zero()}, F.zero())]
    _, kernel = solve_rows(F, sys_rows, len(rows))
    out = []
    for k in kernel.basis():
        v = {}
        for r, c in k.items():
            v_axpy(F, v, c, rows[r])
        out.append(v)
    return out


def coinvariant_subspace(G: GroupScheme, sub: SubgroupScheme) -> Echelon:
    """O(G/L) = {b in O(G) : b_1 (x) q_L(b_2) = b (x) 1} as a subspace of O(G)."""
    O = G.coordinate_algebra
    F = G.field
    n = G.order
    m = sub.order
    qmat = sub.q.mat
    unitL = sub.own.coordinate_algebra.unit
    coef: dict = {}
    for i in range(n):
        for (a, b), c in O.comult[i].items():
            qb = qmat.get(b)
            if qb:
                for l, ql in qb.items():
                    d = coef.setdefault((a, l), {})
                    d[i] = F.add(d.get(i, F.zero()), F.mul(c, ql))
        for l, ul in unitL.items():
            d = coef.setdefault((i, l), {})
            d[i] = F.sub(d.get(i, F.zero()), ul)
    rows = [({i: c for i, c in r.items() if c != F.zero()}, F.zero())
            for r in coef.values()]
    _, kernel = solve_rows(F, rows, n)
    return kernel


def quotient_by_normal(G: GroupScheme, H_sub: SubgroupScheme) -> Quotient:
    """k[G/H] = k[G]/(k[H]^+ k[G]) with canonical complement-of-pivots basis."""
    if not is_normal(H_sub):
        raise NotNormal(f"{H_sub} is not normal in {G.name}")
    kg = G.group_algebra
    F = G.field
    n = G.order
    plus = augmentation_ideal_basis(H_sub)
    J = Echelon(F, n)
    for v in plus:
        for j in range(n):
            J.insert(kg.product(v, unit_vec(j, F)))
    # two-sided stability (holds for normal H; verified, not assumed)
    grew = True
    while grew:
        grew = False
        for row in list(J.basis()):
            for j in range(n):
                if J.insert(kg.product(unit_vec(j, F), row)):
                    grew = True
                if J.insert(kg.product(row, unit_vec(j, F))):
                    grew = True
    reps = [i for i in range(n) if i not in J.rows]
    cls = {i: r for r, i in enumerate(reps)}
    m = len(reps)
    if m * H_sub.order != n:
        raise VerificationFailure("quotient dimension violates Lagrange")

    def project(v):
        res = J.reduce(v)
        return {cls[i]: c for i, c in res.items()}

    pi_mat = {}
    for i in range(n):
        col = project(unit_vec(i, F))
        if col:
            pi_mat[i] = col

    mult = {}
    for r in range(m):
        for s in range(m):
            cell = project(kg.product(unit_vec(reps[r], F), unit_vec(reps[s], F)))
            if cell:
                mult[(r, s)] = cell
    unit = project(kg.unit)
    comult = {}
    for r in range(m):
        t = {}
        for (a, b), c in kg.comult[reps[r]].items():
            pa, pb = pi_mat.get(a), pi_mat.get(b)
            if pa and pb:
                t2_axpy(F, t, c, t2_outer(F, pa, pb))
        comult[r] = t
    counit = {}
    for r in range(m):
        c = kg.counit.get(reps[r])
        if c is not None:
            counit[r] = c
    antipode = {}
    for r in range(m):
        col = project(kg.antipode_of(unit_vec(reps[r], F)))
        if col:
            antipode[r] = col
    labels = [f"[{kg.labels[i]}]" for i in reps]
    hopf = HopfAlgebra(F, labels, mult, unit, comult, counit, antipode,
                       name=f"k[{G.name}/{H_sub.own.name}]")
    rep = verify_hopf(hopf)
    if not rep.ok:
        raise VerificationFailure("quotient violates Hopf axioms: "
                                  + "; ".join(n_ for n_, _ in rep.failures()))
    pi = LinMap(kg, hopf, pi_mat)
    ok, wit = is_hopf_morphism(pi)
    if not ok:
        raise VerificationFailure(f"projection is not a Hopf morphism: {wit}")

    coinv = coinvariant_subspace(G, H_sub)
    if coinv.dim != m:
        raise VerificationFailure("coinvariant model has wrong dimension")
    # mutual duality: <rep_r, c_s> must be a nondegenerate pairing
    pair_cols = {s: {r: c.get(reps[r]) for r in range(m) if c.get(reps[r])}
                 for s, c in enumerate(coinv.basis())}
    pair_ech = Echelon(F, m)
    for s in sorted(pair_cols):
        pair_ech.insert({r: v for r, v in pair_cols[s].items() if v is not None})
    if pair_ech.dim != m:
        raise VerificationFailure("coinvariants do not pair perfectly with k[G/H]")
    return Quotient(G, H_sub, hopf, pi, reps, coinv)


class SectionData:
    def __init__(self, mu: LinMap, mu_inv: LinMap):
        self.mu = mu
        self.mu_inv = mu_inv


class CleavingData:
    def __init__(self, gamma, gamma_inv, eta, eta_inv, quotient: Quotient):
        self.gamma = gamma
        self.gamma_inv = gamma_inv
        self.eta = eta
        self.eta_inv = eta_inv
        self.quotient = quotient


def _map_solver(F, n_src, n_tgt):
    """Tiny helper collecting linear equations on matrix unknowns (r, c)."""
    rows = []

    def flat(r, c):
        return r * n_src + c

    def add_equation(terms, rhs):
        row = {}
        for (r, c), coef in terms.items():
            if coef != F.zero():
                row[flat(r, c)] = coef
        rows.append((row, rhs))

    def solve():
        part, kern = solve_rows(F, rows, n_tgt * n_src)
        return part, kern

    def unflatten(sol):
        mat: dict = {}
        for key, c in sol.items():
            r, col = divmod(key, n_src)
            if c != F.zero():
                mat.setdefault(col, {})[r] = c
        return mat

    return add_equation, solve, unflatten


def _colinear_section_equations(F, add, src_hopf, tgt_hopf, proj_mat, n_src, n_tgt):
    """Equations for a map s: src -> tgt with proj(s(x)) = x and
    s(x_1) (x) x_2 = s(x)_1 (x) proj(s(x)_2), plus s(1) = 1."""
    # section: proj . s = id
    for j in range(n_src):
        for i in range(n_src):
            terms = {}
            for y in range(n_tgt):
                col = proj_mat.get(y)
                if col and col.get(i) is not None:
                    terms[(y, j)] = col[i]
            add(terms, F.one() if i == j else F.zero())
    # colinearity, one equation per (source basis j, tgt coord x, src coord v)
    for j in range(n_src):
        lhs_grid: dict = {}
        for (u, v), c in src_hopf.comult[j].items():
            lhs_grid.setdefault((u, v), c)
        keys = set()
        rows_terms: dict = {}
        for (u, v), c in lhs_grid.items():
            for x in range(n_tgt):
                rows_terms.setdefault((x, v), {})[(x, u)] = F.add(
                    rows_terms.setdefault((x, v), {}).get((x, u), F.zero()), c)
                keys.add((x, v))
        rhs_terms: dict = {}
        for y in range(n_tgt):
            for (x, z), c in tgt_hopf.comult[y].items():
                col = proj_mat.get(z)
                if col:
                    for v, pv in col.items():
                        d = rhs_terms.setdefault((x, v), {})
                        d[(y, j)] = F.add(d.get((y, j), F.zero()), F.mul(c, pv))
                        keys.add((x, v))
        for key in keys:
            terms = dict(rows_terms.get(key, {}))
            for unk, c in rhs_terms.get(key, {}).items():
                terms[unk] = F.sub(terms.get(unk, F.zero()), c)
            add(terms, F.zero())
    # unit normalization s(1_src) = 1_tgt
    for x in range(n_tgt):
        terms = {}
        for j, c in src_hopf.unit.items():
            terms[(x, j)] = c
        add(terms, tgt_hopf.unit.get(x, F.zero()))


def _search_invertible(F, src, tgt, part, kern, budget):
    """Walk the affine solution space in canonical order until a convolution
    invertible section appears."""

    def to_map(sol):
        mat: dict = {}
        n_src = src.dim
        for key, c in sol.items():
            r, col = divmod(key, n_src)
            if c != F.zero():
                mat.setdefault(col, {})[r] = c
        return LinMap(src, tgt, mat)

    tried = 0
    for offset in echelon_points_guard(kern, F, budget):
        tried += 1
        if tried > budget:
            break
        sol = dict(part)
        v_axpy(F, sol, F.one(), offset)
        cand = to_map(sol)
        try:
            inv = convolution_inverse(cand)
            return cand, inv
        except NotInvertible:
            continue
    raise NoInvertibleSectionFound(
        f"no convolution-invertible section within budget {budget}")


def section_mu(L: SubgroupScheme, budget=100_000) -> SectionData:
    """A counit- and unit-preserving O(L)-colinear section of q_L, with its
    convolution inverse.  Closed forms cover the builtin families; otherwise
    the canonical affine solution is searched for invertibility."""
    G = L.ambient
    F = G.field
    OG = G.coordinate_algebra
    OL = L.own.coordinate_algebra
    n, m = G.order, L.order

    cand = None
    if L.tag[0] == "full":
        cand = LinMap(OL, OG, mat_identity(n, F))
    elif L.tag[0] == "trivial":
        cand = LinMap(OL, OG, {0: dict(OG.unit)})
    elif L.tag[0] == "ga_standard":
        cand = LinMap(OL, OG, {i: {i: F.one()} for i in range(m)})
    elif G.kind == "constant" and all(
            row == unit_vec(p, F) for p, row in
            zip(L.subspace.pivots(), L.subspace.basis())):
        # delta functions extend by zero along the element inclusion
        cand = LinMap(OL, OG, {r: {p: F.one()}
                               for r, p in enumerate(L.subspace.pivots())})
    if cand is not None and _section_ok(cand, L):
        try:
            return SectionData(cand, convolution_inverse(cand))
        except NotInvertible:
            pass

    add, solve, unflatten = _map_solver(F, m, n)
    _colinear_section_equations(F, add, OL, OG, L.q.mat, m, n)
    try:
        part, kern = solve()
    except NoSolution:
        raise NoSection("colinear section system is inconsistent")
    mu, mu_inv = _search_invertible(F, OL, OG, part, kern, budget)
    if not _section_ok(mu, L):
        raise VerificationFailure("solved section fails its defining identities")
    return SectionData(mu, mu_inv)


def _section_ok(mu: LinMap, L: SubgroupScheme) -> bool:
    G = L.ambient
    F = G.field
    OG = G.coordinate_algebra
    OL = L.own.coordinate_algebra
    if mat_compose(F, L.q.mat, mu.mat) != mat_identity(L.order, F):
        return False
    if mu.apply(OL.unit) != OG.unit:
        return False
    for s in range(OL.dim):
        lhs = {}
        for (u, v), c in OL.comult[s].items():
            t2_axpy(F, lhs, c, t2_outer(F, mu.apply(unit_vec(u, F)), unit_vec(v, F)))
        rhs = {}
        for (x, z), c in OG.coproduct(mu.apply(unit_vec(s, F))).items():
            qz = L.q.apply(unit_vec(z, F))
            if qz:
                t2_axpy(F, rhs, c, t2_outer(F, unit_vec(x, F), qz))
        if lhs != rhs:
            return False
        if OG.counit_of(mu.apply(unit_vec(s, F))) != OL.counit.get(s, F.zero()):
            return False
    return True


def _cleaving_ok(gamma: LinMap, quotient: Quotient) -> bool:
    G = quotient.G
    F = G.field
    kg = G.group_algebra
    Q = quotient.hopf
    if mat_compose(F, quotient.pi.mat, gamma.mat) != mat_identity(Q.dim, F):
        return False
    if gamma.apply(Q.unit) != kg.unit:
        return False
    for j in range(Q.dim):
        lhs = {}
        for (u, v), c in Q.comult[j].items():
            t2_axpy(F, lhs, c, t2_outer(F, gamma.apply(unit_vec(u, F)), unit_vec(v, F)))
        rhs = {}
        for (x, z), c in kg.coproduct(gamma.apply(unit_vec(j, F))).items():
            pz = quotient.pi.apply(unit_vec(z, F))
            if pz:
                t2_axpy(F, rhs, c, t2_outer(F, unit_vec(x, F), pz))
        if lhs != rhs:
            return False
    return True


def cleaving_gamma(G: GroupScheme, H_sub: SubgroupScheme, quotient=None,
                   budget=100_000) -> CleavingData:
    """A convolution-invertible colinear section gamma of pi, with the
    retraction eta = id * (gamma^-1 pi) and the closed-form eta^-1."""
    if quotient is None:
        quotient = quotient_by_normal(G, H_sub)
    F = G.field
    kg = G.group_algebra
    Q = quotient.hopf
    m = Q.dim

    cand = None
    if H_sub.tag[0] == "trivial":
        cand = LinMap(Q, kg, {r: unit_vec(i, F)
                              for r, i in enumerate(quotient.rep_indices)})
    elif H_sub.tag[0] == "full":
        cand = LinMap(Q, kg, {0: dict(kg.unit)})
    else:
        # unique or minimal basis preimage per class covers the constant and
        # Frobenius-tower closed forms
        pre = {}
        for i in range(G.order):
            img = quotient.pi.apply(unit_vec(i, F))
            for r in range(m):
                if img == unit_vec(r, F) and r not in pre:
                    pre[r] = i
        if len(pre) == m:
            cand = LinMap(Q, kg, {r: unit_vec(pre[r], F) for r in range(m)})
    if cand is not None and _cleaving_ok(cand, quotient):
        try:
            gamma, gamma_inv = cand, convolution_inverse(cand)
            return _finish_cleaving(G, H_sub, quotient, gamma, gamma_inv)
        except NotInvertible:
            pass

    add, solve, unflatten = _map_solver(F, m, G.order)
    _colinear_section_equations(F, add, Q, kg, quotient.pi.mat, m, G.order)
    try:
        part, kern = solve()
    except NoSolution:
        raise NoInvertibleSectionFound("colinear section system inconsistent")
    gamma, gamma_inv = _search_invertible(F, Q, kg, part, kern, budget)
    if not _cleaving_ok(gamma, quotient):
        raise VerificationFailure("solved cleaving fails its defining identities")
    return _finish_cleaving(G, H_sub, quotient, gamma, gamma_inv)


def _finish_cleaving(G, H_sub, quotient, gamma, gamma_inv) -> CleavingData:
    F = G.field
    kg = G.group_algebra
    gp = gamma_inv.compose(quotient.pi)
    eta = convolution(identity_map(kg), gp)
    eta_inv = convolution(gamma.compose(quotient.pi),
                          LinMap(kg, kg, kg.antipode))
    # retraction identities
    for row in H_sub.subspace.basis():
        if eta.apply(row) != row:
            raise VerificationFailure("eta does not retract onto k[H]")
    for i in range(G.order):
        if not H_sub.subspace.contains(eta.apply(unit_vec(i, F))):
            raise VerificationFailure("eta image leaves k[H]")
    chk = convolution(eta, eta_inv)
    if chk.mat != convolution_unit(kg, kg).mat:
        raise VerificationFailure("eta inverse is not a convolution inverse")
    return CleavingData(gamma, gamma_inv, eta, eta_inv, quotient)


# -- lattice operations on subgroups ---------------------------------------


def product_subgroup(H: SubgroupScheme, K: SubgroupScheme, name="") -> SubgroupScheme:
    if H.ambient is not K.ambient:
        raise DimensionMismatch("subgroups of different ambient schemes")
    G = H.ambient
    kg = G.group_algebra
    gens = []
    for v in H.subspace.basis():
        for w in K.subspace.basis():
            gens.append(kg.product(v, w))
    return subgroup_from_generators(G, gens, name=name)


def intersect_subgroup(H: SubgroupScheme, K: SubgroupScheme, name="") -> SubgroupScheme:
    """K meet K', computed dually via the ideal sum and cross-checked against
    the plain subspace intersection.  A mismatch is a hard error."""
    if H.ambient is not K.ambient:
        raise DimensionMismatch("subgroups of different ambient schemes")
    G = H.ambient
    F = G.field
    O = G.coordinate_algebra
    n = G.order

    def defining_ideal(sub):
        coinv = coinvariant_subspace(G, sub)
        ideal = Echelon(F, n)
        for c in coinv.basis():
            cplus = v_sub(F, c, v_scale(F, O.counit_of(c), O.unit))
            for j in range(n):
                ideal.insert(O.product(cplus, unit_vec(j, F)))
        return ideal

    ideal_sum = defining_ideal(H)
    for row in defining_ideal(K).basis():
        ideal_sum.insert(row)
    dual_result = annihilator(ideal_sum)
    direct = subspace_intersection(H.subspace, K.subspace)
    if dual_result.key() != direct.key():
        raise VerificationFailure(
            "dual and direct subgroup intersections disagree")
    return subgroup_from_subspace(G, direct, name=name)


def characters(K: SubgroupScheme, budget=10**7):
    """Grouplikes of O(K): the characters the bicharacter side of an
    equivariant map must hit."""
    own = K.own
    if own.order_points == 1 and own.order_connected == own.order:
        return [dict(own.coordinate_algebra.unit)]
    return grouplikes(own.coordinate_algebra, budget)


def group_elements(K: SubgroupScheme, budget=10**7):
    """Grouplikes of k[K]."""
    own = K.own
    if own.order_points == 1 and own.order_connected == own.order:
        return [dict(own.group_algebra.unit)]
    return grouplikes(own.group_algebra, budget)
