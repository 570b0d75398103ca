"""Bivariate bicycle code construction and syndrome-code analyses.

Builds CSS codes from two bivariate ring polynomials, derives a logical
observable basis, counts the small syndrome-noise configurations that
dominate single-shot failure rates, and provides GF(2)[x] polynomial GCD
for the syndrome-code divisibility check.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import gf2
from .gf2 import BitVector, SparseBitMatrix


@dataclass(frozen=True)
class BivariatePoly:
    """Polynomial in F2[x, y] / (x^l - 1, y^m - 1), stored as exponent pairs."""

    l: int
    m: int
    monomials: frozenset

    @classmethod
    def make(cls, l: int, m: int, monomials) -> "BivariatePoly":
        reduced = frozenset((int(a) % l, int(b) % m) for a, b in monomials)
        return cls(l, m, reduced)

    @classmethod
    def parse(cls, l: int, m: int, text: str) -> "BivariatePoly":
        """Parse e.g. 'x^3 + y^2 + y^7', 'x*y^2 + 1'."""
        monomials = []
        for term in text.split("+"):
            term = term.strip()
            if not term:
                raise ValueError(f"empty term in polynomial {text!r}")
            if term == "1":
                monomials.append((0, 0))
                continue
            a = b = 0
            for factor in term.split("*"):
                mt = re.fullmatch(r"([xy])(?:\^(\d+))?", factor.strip())
                if mt is None:
                    raise ValueError(f"bad monomial factor {factor!r} in {text!r}")
                exp = int(mt.group(2) or 1)
                if mt.group(1) == "x":
                    a += exp
                else:
                    b += exp
            monomials.append((a, b))
        return cls.make(l, m, monomials)

    def __str__(self):
        def fmt(a, b):
            parts = []
            if a:
                parts.append(f"x^{a}" if a > 1 else "x")
            if b:
                parts.append(f"y^{b}" if b > 1 else "y")
            return "*".join(parts) or "1"

        return " + ".join(fmt(a, b) for a, b in sorted(self.monomials))


def circulant_matrix(poly: BivariatePoly) -> SparseBitMatrix:
    """Sum over monomials of S_l^a (x) S_m^b, an (l*m) x (l*m) matrix.

    Column m*i + j of the (a, b) term has its one at row m*((i+a)%l) + (j+b)%m.
    """
    l, m = poly.l, poly.m
    n = l * m
    cols = np.arange(n)
    i, j = cols // m, cols % m
    entries = []
    for a, b in sorted(poly.monomials):
        rows = ((i + a) % l) * m + (j + b) % m
        entries.append(np.stack([rows, cols], axis=1))
    if not entries:
        return SparseBitMatrix(n, n, [])
    return SparseBitMatrix(n, n, np.concatenate(entries))


@dataclass
class CssCode:
    """CSS code with X/Z parity checks and a logical observable basis."""

    N: int
    K: int
    H_X: SparseBitMatrix
    H_Z: SparseBitMatrix
    L_Z: SparseBitMatrix
    d: int | None = None
    provenance: dict = field(default_factory=dict)

    def validate(self):
        prod = (self.H_X.to_dense().astype(np.int64) @ self.H_Z.to_dense().T.astype(np.int64)) % 2
        if prod.any():
            raise AssertionError("CSS condition H_X H_Z^T = 0 violated")
        k = self.N - gf2.rank(self.H_X) - gf2.rank(self.H_Z)
        if k != self.K:
            raise AssertionError(f"K mismatch: {self.K} vs {k}")


def logical_basis(H_X: SparseBitMatrix, H_Z: SparseBitMatrix) -> SparseBitMatrix:
    """K observable rows spanning kernel(H_Z)/rowspace(H_X).

    Greedy selection: extend a row basis seeded with H_X by kernel(H_Z)
    vectors; each vector that increases the rank becomes a logical row.
    Rows orthogonal to every H_Z row keep the observable value L·e invariant
    when a correction differs from the fault by a rowspace(H_Z) element, the
    degeneracy a decoder working against H_X cannot resolve.  The logical
    pairing is nondegenerate, so L·k = 0 for k in kernel(H_X) exactly when
    k is in rowspace(H_Z).
    """
    n = H_X.n_cols
    basis_rows = [H_X.to_dense()[i] for i in range(H_X.n_rows)]
    # reduced echelon bookkeeping: pivot column -> reduced row
    pivots: dict[int, np.ndarray] = {}

    def reduce(vec):
        v = vec.copy()
        for col, row in pivots.items():
            if v[col]:
                v ^= row
        return v

    def insert(vec) -> bool:
        v = reduce(vec)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        pivots[int(nz[0])] = v
        return True

    for row in basis_rows:
        insert(row.astype(np.uint8))

    logicals = []
    for k in gf2.kernel_basis(H_Z):
        if insert(k.to_dense()):
            logicals.append(k)
    entries = [(i, int(c)) for i, vec in enumerate(logicals) for c in vec.support]
    return SparseBitMatrix(len(logicals), n, entries)


def build_bb_code(l: int, m: int, a: BivariatePoly, b: BivariatePoly,
                  d: int | None = None) -> CssCode:
    """Bivariate bicycle code: H_X = [A|B], H_Z = [B^T|A^T], N = 2*l*m."""
    if (a.l, a.m) != (l, m) or (b.l, b.m) != (l, m):
        raise ValueError("polynomials must share the cyclic orders (l, m)")
    A = circulant_matrix(a)
    B = circulant_matrix(b)
    H_X = SparseBitMatrix.hstack([A, B])
    H_Z = SparseBitMatrix.hstack([B.transpose(), A.transpose()])
    N = 2 * l * m
    K = N - gf2.rank(H_X) - gf2.rank(H_Z)
    L_Z = logical_basis(H_X, H_Z)
    assert L_Z.n_rows == K, "logical basis size must equal K"
    code = CssCode(N=N, K=K, H_X=H_X, H_Z=H_Z, L_Z=L_Z, d=d,
                   provenance={"l": l, "m": m, "a": str(a), "b": str(b)})
    code.validate()
    return code


# -- syndrome-code configuration counting ------------------------------------


def count_weight2_syndrome_configs(H_X: SparseBitMatrix) -> int:
    """Sum over columns of C(column_weight, 2)."""
    w = H_X.col_weights()
    return int((w * (w - 1) // 2).sum())


_TRIPLE_COL_LIMIT = 500


def enumerate_low_weight_syndrome_codewords(H_X: SparseBitMatrix, max_columns: int,
                                            max_weight: int):
    """All column subsets of size 1..max_columns whose GF(2) sum has weight
    <= max_weight.  Returns a list of (column tuple, codeword weight)."""
    if max_columns > 3:
        raise ValueError("subset size limited to 3")
    n = H_X.n_cols
    if max_columns >= 3 and n > _TRIPLE_COL_LIMIT:
        raise ValueError(
            f"triple enumeration refused for {n} columns (limit {_TRIPLE_COL_LIMIT})")
    dense = H_X.to_dense().astype(np.uint8)
    out = []
    weights = dense.sum(axis=0)
    if max_columns >= 1:
        for j in np.flatnonzero(weights <= max_weight):
            out.append(((int(j),), int(weights[j])))
    if max_columns >= 2:
        for i in range(n):
            xor = dense[:, i][:, None] ^ dense[:, i + 1:]
            w = xor.sum(axis=0)
            for off in np.flatnonzero(w <= max_weight):
                out.append(((i, int(i + 1 + off)), int(w[off])))
    if max_columns >= 3:
        for i, j in combinations(range(n), 2):
            pair = dense[:, i] ^ dense[:, j]
            xor = pair[:, None] ^ dense[:, j + 1:]
            w = xor.sum(axis=0)
            for off in np.flatnonzero(w <= max_weight):
                out.append(((i, j, int(j + 1 + off)), int(w[off])))
    return out


def count_syndrome_codewords(H_X: SparseBitMatrix, size: int, weight: int) -> int:
    """Number of column subsets of the given size whose XOR has the given weight."""
    found = enumerate_low_weight_syndrome_codewords(H_X, size, weight)
    return sum(1 for cols, w in found if len(cols) == size and w == weight)


def config_b_coefficient(H_X: SparseBitMatrix) -> int:
    """Coefficient of the p_d * p_s^2 lower-bound term.

    Each weight-3 codeword formed by three columns admits 3 choices of the
    data column and C(3,2) check pairs per choice, hence 9 per triple.
    """
    return 9 * count_syndrome_codewords(H_X, 3, 3)


# -- univariate GF(2) polynomials (bitmask encoding, bit k = x^k) ------------


def poly_from_exponents(exps) -> int:
    p = 0
    for e in exps:
        p ^= 1 << e
    return p


def poly_mul_gf2(a: int, b: int) -> int:
    r = 0
    while b:
        lsb = b & -b
        r ^= a << (lsb.bit_length() - 1)
        b ^= lsb
    return r


def poly_mod_gf2(a: int, b: int) -> int:
    if b == 0:
        raise ZeroDivisionError("polynomial modulus by zero")
    db = b.bit_length()
    while a.bit_length() >= db:
        a ^= b << (a.bit_length() - db)
    return a


def poly_gcd_gf2(a: int, b: int) -> int:
    if a == 0 or b == 0:
        raise ValueError("gcd requires nonzero polynomials")
    while b:
        a, b = b, poly_mod_gf2(a, b)
    return a


def poly_divides(g: int, h: int) -> bool:
    """True when g(x) divides h(x) over GF(2)."""
    return poly_mod_gf2(h, g) == 0


# -- code description text format --------------------------------------------


def parse_code_description(text: str):
    """Parse 'l m' header plus 'a: ...' and 'b: ...' polynomial lines.

    Returns (l, m, a, b, d) with d taken from an optional 'd: <int>' line.
    """
    l = m = None
    a = b = None
    d = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"bad header line {raw!r}")
            l, m = int(parts[0]), int(parts[1])
            continue
        key, val = (t.strip() for t in line.split(":", 1))
        if key == "d":
            d = int(val)
        elif key in ("a", "b"):
            if l is None:
                raise ValueError("polynomial line before 'l m' header")
            poly = BivariatePoly.parse(l, m, val)
            if key == "a":
                a = poly
            else:
                b = poly
        else:
            raise ValueError(f"unknown key {key!r}")
    if l is None or a is None or b is None:
        raise ValueError("code description needs 'l m', 'a:' and 'b:' lines")
    return l, m, a, b, d


def bb_code_from_description(text: str) -> CssCode:
    l, m, a, b, d = parse_code_description(text)
    return build_bb_code(l, m, a, b, d=d)
