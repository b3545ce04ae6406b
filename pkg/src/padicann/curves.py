"""Hyperelliptic curves y^2 = f(x) over Q_p and their annulus decompositions.

The branch points of f are organized into a cluster tree by the valuations of
their pairwise differences.  Each edge of the tree from a cluster to a proper
sub-cluster gives an annulus on the projective line free of branch points; the
annuli are classified odd / even / Weierstrass by the number of branch points
inside, and carry the constants (gamma, alpha, the x^2 - a datum) needed to
pull regular differentials back to Laurent data on the annulus.

Input curves must split over Q_p at working precision, or the caller supplies
the pairwise valuation matrix of the branch points; extension fields are out
of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import (
    DegreeTooLarge,
    GammaNotSquare,
    MissingAlpha,
    NonSplitInput,
    PrecisionInsufficient,
    UnsupportedRegime,
)
from .padic import DEFAULT_PRECISION, INF, PAdic, is_square, sqrt

ODD = "odd"
EVEN = "even"
WEIERSTRASS = "weierstrass"


# ---------------------------------------------------------------------------
# integer polynomial utilities and Q_p root finding
# ---------------------------------------------------------------------------


def _clear_denominators(coeffs: Sequence[Fraction]) -> List[int]:
    """Scale to integer coefficients and divide out the content."""
    fracs = [Fraction(c) for c in coeffs]
    lcm = 1
    for c in fracs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in fracs]
    content = 0
    for c in ints:
        content = math.gcd(content, c)
    if content > 1:
        ints = [c // content for c in ints]
    return ints


def _poly_eval(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_derivative(coeffs: Sequence[int]) -> List[int]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def _vp(n: int, p: int, cap: int) -> int:
    if n == 0:
        return cap
    v = 0
    while n % p == 0 and v < cap:
        n //= p
        v += 1
    return v


def _newton_refine(coeffs, deriv, a: int, vd: int, p: int, target: int) -> int:
    """Refine a certified approximate root to an exact residue mod p^target."""
    modulus = p ** (target + vd)
    x = a % modulus
    for _ in range(target + 64):
        fx = _poly_eval(coeffs, x)
        if fx % modulus == 0 and _vp(fx, p, target + vd) >= target + vd:
            break
        u = _poly_eval(deriv, x) // p**vd
        t = fx // p**vd
        x = (x - t * pow(u, -1, modulus)) % modulus
    return x % p**target


def _taylor_values(coeffs: Sequence[int], b: int) -> List[int]:
    """Values f^{(i)}(b)/i! for i = 0..deg (integer Taylor coefficients at b)."""
    out = []
    n = len(coeffs)
    for i in range(n):
        acc = 0
        power = 1
        for j in range(i, n):
            acc += coeffs[j] * math.comb(j, i) * power
            power *= b
        out.append(acc)
    return out


def _zp_roots(coeffs: Sequence[int], p: int, prec: int) -> List[int]:
    """Certified simple roots in Z_p, as residues mod p^prec.

    Branches of residues are refined digit by digit; a branch is certified as
    holding exactly one root once v(f(a)) > 2 v(f'(a)) and the branch depth
    exceeds v(f'(a)).  A branch can contain a root only if the constant term
    of the Taylor expansion at its base does not strictly dominate the other
    terms; branches failing that are pruned.  Branches still alive but
    uncertified at depth `prec` cannot be separated at this precision.
    """
    deriv = _poly_derivative(coeffs)
    cap = prec
    vcap = 2 * prec + 8

    def may_contain_root(b: int, k: int) -> bool:
        taylor = _taylor_values(coeffs, b)
        v0 = _vp(taylor[0], p, vcap)
        if v0 < k:
            return False
        best = min(
            (_vp(t, p, vcap) + i * k for i, t in enumerate(taylor) if i > 0),
            default=vcap,
        )
        return v0 >= min(best, vcap)

    roots: List[int] = []
    frontier = [a for a in range(p) if may_contain_root(a, 1)]
    for k in range(1, cap + 1):
        if not frontier:
            break
        survivors = []
        for a in frontier:
            va = _vp(_poly_eval(coeffs, a), p, vcap)
            vd = _vp(_poly_eval(deriv, a), p, vcap)
            if va > 2 * vd and k > vd and va >= k + vd:
                roots.append(_newton_refine(coeffs, deriv, a, vd, p, prec))
                continue
            step = p**k
            for s in range(p):
                b = a + s * step
                if may_contain_root(b, k + 1):
                    survivors.append(b)
        frontier = survivors
    if frontier:
        raise PrecisionInsufficient(
            f"{len(frontier)} root branch(es) cannot be separated at precision {prec}"
        )
    if len(set(roots)) != len(roots):
        raise PrecisionInsufficient("duplicate certified roots; raise precision")
    return sorted(roots)


def _qp_roots(coeffs: Sequence[Fraction], p: int, prec: int) -> List[PAdic]:
    """All roots of f in Q_p (integral and not), certified simple.

    Raises NonSplitInput when fewer than deg(f) roots are found.
    """
    ints = _clear_denominators(coeffs)
    while ints and ints[-1] == 0:
        ints.pop()
    deg = len(ints) - 1
    roots = []
    while ints and ints[0] == 0:
        ints = ints[1:]                # x | f: an exact root at 0
        roots.append(PAdic.zero(p))
    for a in _zp_roots(ints, p, prec):
        if a % p**prec == 0:
            roots.append(PAdic.inexact_zero(p, prec))
        else:
            roots.append(PAdic.from_int(a, p, prec))
    rev = list(reversed(ints))
    while rev and rev[-1] == 0:
        rev.pop()
    one = PAdic.from_int(1, p, prec + 4)
    for b in _zp_roots(rev, p, prec):
        if b % p == 0 and b % p**prec != 0:
            roots.append(one / PAdic.from_int(b, p, prec))
    if len(roots) != deg:
        raise NonSplitInput(
            f"found {len(roots)} of {deg} roots in Q_p at precision {prec}; "
            "supply a valuation matrix or raise precision"
        )
    return roots


# ---------------------------------------------------------------------------
# the curve
# ---------------------------------------------------------------------------


def _poly_gcd_degree(a: List[Fraction], b: List[Fraction]) -> int:
    """Degree of gcd(a, b) over Q (Euclid on Fraction coefficients)."""

    def strip(c):
        while c and c[-1] == 0:
            c.pop()
        return c

    a, b = strip(list(a)), strip(list(b))
    while b:
        if len(a) < len(b):
            a, b = b, a
            continue
        lead = a[-1] / b[-1]
        shift = len(a) - len(b)
        a = strip(
            [
                a[i] - lead * b[i - shift] if 0 <= i - shift < len(b) else a[i]
                for i in range(len(a) - 1)
            ]
        )
        a, b = b, a
    return len(a) - 1


class HyperellipticCurve:
    """y^2 = f(x) with rational coefficients, over Q_p."""

    def __init__(self, f_coefficients, p: int, precision: int = DEFAULT_PRECISION):
        coeffs = [Fraction(c) for c in f_coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) - 1 < 3:
            raise ValueError("need deg f >= 3")
        self.f = coeffs
        self.p = p
        self.precision = precision
        self.degree = len(coeffs) - 1
        self.genus = (self.degree - 1) // 2
        self.leading_coefficient = coeffs[-1]
        if _poly_gcd_degree(coeffs, self._deriv()) > 0:
            raise ValueError("f must be squarefree")
        self._roots = None

    def _deriv(self):
        return [i * c for i, c in enumerate(self.f)][1:]

    def evaluate(self, x) -> Fraction:
        x = Fraction(x)
        acc = Fraction(0)
        for c in reversed(self.f):
            acc = acc * x + c
        return acc

    def roots(self) -> List[PAdic]:
        if self._roots is None:
            self._roots = _qp_roots(self.f, self.p, self.precision)
        return self._roots

    @property
    def has_infinite_branch_point(self) -> bool:
        return self.degree % 2 == 1

    def to_json(self):
        return {
            "p": self.p,
            "f": [str(c) for c in self.f],
            "precision": self.precision,
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            [Fraction(str(c)) for c in obj["f"]],
            int(obj["p"]),
            int(obj.get("precision", DEFAULT_PRECISION)),
        )

    def __repr__(self):
        return f"HyperellipticCurve(deg={self.degree}, g={self.genus}, p={self.p})"


# ---------------------------------------------------------------------------
# cluster tree
# ---------------------------------------------------------------------------


@dataclass
class ClusterNode:
    indices: Tuple[int, ...]
    depth: Optional[Fraction]          # None for singleton leaves
    children: List["ClusterNode"] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.indices)

    @property
    def least(self) -> int:
        return self.indices[0]

    def __repr__(self):
        return f"ClusterNode({list(self.indices)}, depth={self.depth})"


class ClusterTree:
    def __init__(self, root: ClusterNode, matrix, roots: Optional[List[PAdic]]):
        self.root = root
        self.matrix = matrix
        self.roots = roots

    def proper_nodes(self) -> List[ClusterNode]:
        out = []

        def walk(node):
            if node.size >= 2:
                out.append(node)
                for ch in node.children:
                    walk(ch)

        walk(self.root)
        return out

    def edges(self) -> List[Tuple[ClusterNode, ClusterNode]]:
        """(parent, proper child) pairs, in deterministic order."""
        out = []

        def walk(node):
            for ch in node.children:
                if ch.size >= 2:
                    out.append((node, ch))
                    walk(ch)

        walk(self.root)
        return out

    def node_count_without_leaves(self) -> int:
        return len(self.proper_nodes())


def _matrix_from_roots(roots: List[PAdic]):
    n = len(roots)
    m = [[INF] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            diff = roots[i] - roots[j]
            if diff.is_zero():
                raise PrecisionInsufficient(
                    f"roots {i} and {j} are indistinguishable at this precision"
                )
            m[i][j] = m[j][i] = Fraction(diff.valuation)
    return m


def _build_node(indices: List[int], matrix) -> ClusterNode:
    if len(indices) == 1:
        return ClusterNode((indices[0],), None)
    depth = min(matrix[i][j] for i in indices for j in indices if i < j)
    # partition at valuation > depth (transitive for ultrametric input)
    remaining = list(indices)
    classes = []
    while remaining:
        seed = remaining.pop(0)
        cls = [seed]
        changed = True
        while changed:
            changed = False
            for k in list(remaining):
                if any(matrix[k][c] > depth for c in cls):
                    cls.append(k)
                    remaining.remove(k)
                    changed = True
        classes.append(sorted(cls))
    children = [_build_node(cls, matrix) for cls in classes]
    children.sort(key=lambda ch: (ch.depth if ch.depth is not None else INF, ch.least))
    return ClusterNode(tuple(sorted(indices)), depth, children)


def build_cluster_tree(curve: HyperellipticCurve, valuation_matrix=None) -> ClusterTree:
    """Nest the finite branch points by pairwise difference valuations."""
    if valuation_matrix is not None:
        n = curve.degree
        if len(valuation_matrix) != n or any(len(row) != n for row in valuation_matrix):
            raise ValueError(f"valuation matrix must be {n}x{n}")
        matrix = [
            [Fraction(x) if i != j else INF for j, x in enumerate(row)]
            for i, row in enumerate(valuation_matrix)
        ]
        for i in range(n):
            for j in range(n):
                if i != j and matrix[i][j] != matrix[j][i]:
                    raise ValueError("valuation matrix must be symmetric")
        roots = None
    else:
        roots = curve.roots()
        matrix = _matrix_from_roots(roots)
    root = _build_node(list(range(len(matrix))), matrix)
    return ClusterTree(root, matrix, roots)


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------


@dataclass
class AnnulusDescriptor:
    kind: str
    theta0: Tuple[int, ...]            # indices of the enclosed branch points
    nu: int
    genus: int
    depths: Tuple[Fraction, Fraction]  # (parent depth, child depth) on the x-line
    domain: Tuple[Fraction, Fraction]  # valuation interval of the parameter t
    window: Tuple[int, int]
    gamma: Optional[PAdic] = None
    alpha: Optional[PAdic] = None
    a_const: Optional[PAdic] = None
    center: Optional[PAdic] = None
    split: Optional[bool] = None
    count: Optional[int] = None        # curve-side annulus components (orbit view)
    flags: List[str] = field(default_factory=list)

    def to_json(self):
        def ser(v):
            return None if v is None else v.to_json()

        return {
            "kind": self.kind,
            "theta0": list(self.theta0),
            "nu": self.nu,
            "depths": [str(d) for d in self.depths],
            "domain": [str(d) for d in self.domain],
            "window": list(self.window),
            "gamma": ser(self.gamma),
            "alpha": ser(self.alpha),
            "a_const": ser(self.a_const),
            "center": ser(self.center),
            "split": self.split,
            "count": self.count,
            "flags": self.flags,
        }


@dataclass
class DiskRegion:
    kind: str                      # infinity | free | branch | weierstrass
    level: Optional[Fraction]      # disk is {v(x - anchor) > level}
    anchor: Optional[int]          # integer lift of the disk center, None for infinity
    count: Optional[int]           # curve-side residue components over the region
    may_contain_points: bool
    branch_index: Optional[int] = None
    annulus_ref: Optional[int] = None

    def to_json(self):
        return {
            "kind": self.kind,
            "level": None if self.level is None else str(self.level),
            "anchor": self.anchor,
            "count": self.count,
            "may_contain_points": self.may_contain_points,
            "branch_index": self.branch_index,
            "annulus_ref": self.annulus_ref,
        }


@dataclass
class Decomposition:
    curve: HyperellipticCurve
    tree: ClusterTree
    annuli: List[AnnulusDescriptor]
    disks: Optional[List[DiskRegion]]
    t_estimate: int
    iota_orbit_count: int
    flags: List[str]

    def to_json(self):
        return {
            "p": self.curve.p,
            "genus": self.curve.genus,
            "annuli": [a.to_json() for a in self.annuli],
            "disks": None if self.disks is None else [d.to_json() for d in self.disks],
            "t_estimate": self.t_estimate,
            "iota_orbit_count": self.iota_orbit_count,
            "flags": self.flags,
        }


def _rational_square_in_qp(x: Fraction, p: int) -> bool:
    """Is the nonzero rational x a square in Q_p?  (p odd.)"""
    if p == 2:
        raise UnsupportedRegime("square classes mod 2 need the odd-prime model")
    x = Fraction(x)
    vn = _vp(x.numerator, p, 10**6)
    vd = _vp(x.denominator, p, 10**6)
    if (vn - vd) % 2 != 0:
        return False
    r = (x.numerator // p**vn) * pow(x.denominator // p**vd, -1, p) % p
    return pow(r, (p - 1) // 2, p) == 1


def _gamma_for(curve, tree, child: ClusterNode, center: PAdic) -> PAdic:
    gamma = PAdic.from_rational(curve.leading_coefficient, curve.p, curve.precision)
    inside = set(child.indices)
    for j, theta in enumerate(tree.roots):
        if j not in inside:
            gamma = gamma * (center - theta)
    return gamma


def _gamma_valuation_from_matrix(curve, tree, child: ClusterNode) -> Fraction:
    lc = curve.leading_coefficient
    v = Fraction(_vp(lc.numerator, curve.p, 10**6) - _vp(lc.denominator, curve.p, 10**6))
    c0 = child.least
    n = len(tree.matrix)
    for j in range(n):
        if j not in child.indices:
            v += tree.matrix[c0][j]
    return v


def _classify_edge(curve, tree, parent: ClusterNode,
                   child: ClusterNode) -> AnnulusDescriptor:
    g = curve.genus
    s = child.size
    total_branch = curve.degree + (1 if curve.has_infinite_branch_point else 0)
    outside = total_branch - s
    d_par, d_ch = Fraction(parent.depth), Fraction(child.depth)
    flags = []

    have_roots = tree.roots is not None
    if s == 2:
        kind, nu = WEIERSTRASS, 1
    elif s % 2 == 1:
        kind, nu = ODD, (s - 1) // 2
        if not 1 <= nu <= g - 1:
            flags.append("nu-out-of-range")
        if outside < 3:
            flags.append("exterior-singleton")
    else:
        kind, nu = EVEN, s // 2
        if not 2 <= nu <= g - 1:
            flags.append("nu-out-of-range")
        if outside == 2:
            flags.append("exterior-pair")

    gamma = alpha = a_const = center = None
    split = None
    if have_roots:
        roots = tree.roots
        if kind == WEIERSTRASS:
            i1, i2 = child.indices
            center = (roots[i1] + roots[i2]) / 2
            diff = roots[i1] - roots[i2]
            a_const = (diff / 4) ** 2
        else:
            center = roots[child.least]
        gamma = _gamma_for(curve, tree, child, center)
        v_gamma = Fraction(gamma.valuation)
        if kind in (EVEN, WEIERSTRASS):
            split = is_square(gamma)
            if split:
                alpha = sqrt(gamma)
            else:
                flags.append("non-split")
    else:
        flags.append("gamma-unknown")
        v_gamma = _gamma_valuation_from_matrix(curve, tree, child)

    if kind == ODD:
        domain = ((d_par - v_gamma) / 2, (d_ch - v_gamma) / 2)
        window = (-2 * nu, 2 * g - 2 - 2 * nu)
        count = 1
    elif kind == EVEN:
        domain = (d_par, d_ch)
        window = (-nu, g - 1 - nu)
        count = None if split is None else (2 if split else 0)
    else:
        domain = (d_par, 2 * d_ch - d_par)
        window = (-g, g - 2)
        count = None if split is None else (1 if split else 0)

    return AnnulusDescriptor(
        kind=kind, theta0=child.indices, nu=nu, genus=g,
        depths=(d_par, d_ch), domain=domain, window=window,
        gamma=gamma, alpha=alpha, a_const=a_const, center=center,
        split=split, count=count, flags=flags,
    )


def _free_disk_count(curve, x_lift: int) -> int:
    """Curve components over a branch-point-free residue disk: 2 or 0."""
    value = curve.evaluate(x_lift)
    if value == 0:
        raise ValueError("free disk contains a branch point")
    return 2 if _rational_square_in_qp(value, curve.p) else 0


def _build_disk_regions(curve, tree, annuli, edge_index) -> List[DiskRegion]:
    p = curve.p
    regions: List[DiskRegion] = []

    if curve.has_infinite_branch_point:
        regions.append(DiskRegion("infinity", None, None, 1, True))
    else:
        lc_square = _rational_square_in_qp(curve.leading_coefficient, p)
        regions.append(
            DiskRegion("infinity", None, None, 2 if lc_square else 0, lc_square)
        )

    def lift(i: int) -> int:
        return int(tree.roots[i].lift())

    def walk(node: ClusterNode):
        d = int(node.depth)
        base = lift(node.least)
        occupied = {}
        for ch in node.children:
            offset = (lift(ch.least) - base) // p**d % p
            occupied[offset] = ch
        for s in range(p):
            ch = occupied.get(s)
            if ch is None:
                x_s = base + s * p**d
                cnt = _free_disk_count(curve, x_s)
                regions.append(
                    DiskRegion("free", Fraction(d), x_s, cnt, cnt > 0)
                )
            elif ch.size == 1:
                regions.append(
                    DiskRegion(
                        "branch", Fraction(d), lift(ch.least), 1, True,
                        branch_index=ch.least,
                    )
                )
            elif ch.size == 2:
                idx = edge_index[ch.indices]
                ann = annuli[idx]
                cnt = ann.count
                regions.append(
                    DiskRegion(
                        "weierstrass", Fraction(d), lift(ch.least), cnt, True,
                        annulus_ref=idx,
                    )
                )
            else:
                walk(ch)

    walk(tree.root)
    return regions


def decompose(curve: HyperellipticCurve, valuation_matrix=None) -> Decomposition:
    """Split P^1(Q_p) along the cluster tree into annuli and residue disks."""
    if curve.genus < 2:
        raise ValueError("decomposition needs genus >= 2")
    if curve.p == 2:
        raise UnsupportedRegime("decomposition is implemented for odd p")
    tree = build_cluster_tree(curve, valuation_matrix)
    flags = []

    annuli = []
    edge_index = {}
    for parent, child in tree.edges():
        ann = _classify_edge(curve, tree, parent, child)
        edge_index[child.indices] = len(annuli)
        annuli.append(ann)
        flags.extend(f"{ann.kind}:{f}" for f in ann.flags)

    edges = len(annuli)
    root = tree.root
    # For even degree the top cluster vertex has no branch point at infinity
    # behind it; with exactly two children it is a degree-2 vertex of the
    # branch-point hull and smooths away, joining its two incident edges.
    degenerate_root = (
        not curve.has_infinite_branch_point and len(root.children) == 2
    )
    iota_orbit_count = edges - (1 if degenerate_root else 0)
    if degenerate_root:
        flags.append("root-degree-two-merged")
    t_estimate = sum(1 for a in annuli if a.kind == EVEN)

    disks = None
    if tree.roots is not None:
        integral = all(r.valuation >= 0 for r in tree.roots)
        if integral and root.depth == 0:
            disks = _build_disk_regions(curve, tree, annuli, edge_index)
        else:
            flags.append("disks-skipped-nonintegral-or-deep-roots")
    else:
        flags.append("disks-skipped-no-roots")

    if iota_orbit_count > 2 * curve.genus - 1:
        flags.append("iota-orbit-bound-exceeded")
    return Decomposition(curve, tree, annuli, disks, t_estimate, iota_orbit_count, flags)


# ---------------------------------------------------------------------------
# differentials: pullbacks and exponent windows
# ---------------------------------------------------------------------------


def _shift_poly(coeffs: List[PAdic], center: PAdic) -> List[PAdic]:
    """Coefficients of u(center + w) as a polynomial in w."""
    n = len(coeffs)
    out = []
    for k in range(n):
        acc = None
        for j in range(k, n):
            term = coeffs[j] * math.comb(j, k) * center ** (j - k)
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def pullback_differential(A: AnnulusDescriptor, u_tilde) -> "LaurentData":
    """Laurent part of the pullback of u_tilde(x) dx / (2y) to the annulus.

    u_tilde is given by ascending coefficients of a polynomial of degree at
    most g-1.  The unit factor of the pullback carries no zeros and is left
    symbolic; only the Laurent polynomial that controls zero counts returns.
    """
    from .series import LaurentData, LaurentPoly

    g = A.genus
    p = A.gamma.p if A.gamma is not None else (A.center.p if A.center else None)
    if p is None:
        raise MissingAlpha("annulus descriptor lacks its constants "
                           "(built from a valuation matrix?)")
    coeffs = [
        c if isinstance(c, PAdic) else PAdic.from_rational(Fraction(c), p, DEFAULT_PRECISION)
        for c in u_tilde
    ]
    while coeffs and coeffs[-1].is_exact_zero():
        coeffs.pop()
    if len(coeffs) - 1 > g - 1:
        raise DegreeTooLarge(f"u~ degree {len(coeffs) - 1} exceeds g-1 = {g - 1}")
    if not coeffs:
        return LaurentData(LaurentPoly(p, {}), A.domain)

    center = A.center if A.center is not None else PAdic.zero(p)
    shifted = _shift_poly(coeffs, center)

    terms = {}
    if A.kind == ODD:
        if A.gamma is None:
            raise MissingAlpha("odd-case pullback needs gamma")
        for k, b in enumerate(shifted):
            terms[2 * (k - A.nu)] = b * A.gamma ** (k - A.nu)
    elif A.kind == EVEN:
        if A.alpha is None:
            raise MissingAlpha("even-case pullback needs alpha = sqrt(gamma)")
        inv = PAdic.from_int(1, p, DEFAULT_PRECISION) / (A.alpha * 2)
        for k, b in enumerate(shifted):
            terms[k - A.nu] = b * inv
    elif A.kind == WEIERSTRASS:
        if A.alpha is None:
            raise MissingAlpha("Weierstrass-case pullback needs alpha")
        if A.a_const is None:
            raise MissingAlpha("Weierstrass-case pullback needs the x^2 - a datum")
        inv = PAdic.from_int(1, p, DEFAULT_PRECISION) / (A.alpha * 2)
        for k, b in enumerate(shifted):
            for i in range(k + 1):
                e = 2 * i - k - 1
                term = b * math.comb(k, i) * A.a_const ** (k - i) * inv
                terms[e] = terms[e] + term if e in terms else term
    else:
        raise ValueError(f"unknown annulus kind {A.kind!r}")

    return LaurentData(LaurentPoly(p, terms), A.domain)


def good_window_subspace(A: AnnulusDescriptor, g: int, m: int):
    """Exponent window (n1, n2) of width max{2(g-m), 2} and the u~ monomials
    whose pullbacks are supported inside it.  Requires 1 <= m <= g."""
    if not 1 <= m <= g:
        raise ValueError("need 1 <= m <= g")
    nu = A.nu
    span = g - m
    if A.kind == WEIERSTRASS:
        basis = list(range(0, span + 1))
        if m == g:
            return -2, 0, basis
        return -(span + 1), span - 1, basis
    j_lo = max(0, nu - span)
    basis = list(range(j_lo, j_lo + span + 1))
    if m == g:
        return -2, 0, basis
    if A.kind == ODD:
        n1 = 2 * (j_lo - nu)
        return n1, n1 + 2 * span, basis
    return -(span + 1), span - 1, basis


def core_annulus_window(A: AnnulusDescriptor, g: int) -> Tuple[int, int]:
    """Exponent window of the shrunk core annulus, by kind."""
    if A.kind == ODD:
        return (-2 * A.nu, 2 * g - 2 - 2 * A.nu)
    if A.kind == EVEN:
        return (-A.nu, g - 1 - A.nu)
    return (-g, g - 2)
