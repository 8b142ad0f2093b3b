"""Sparse multivariate polynomials with exact rational coefficients."""

import re
from itertools import product as _iproduct

from gmpy2 import mpq

from kpol.algebra import upoly
from kpol.algebra.rat import Rat, format_rat, rat
from kpol.exceptions import ArityMismatch, ParseError

ZERO_DEGREE = -1


class MultiPoly:
    """Immutable sparse polynomial in ``arity`` variables.

    ``terms`` maps exponent tuples to nonzero rationals.  Integer coefficients
    are the common case; rational ones appear after substituting rationals.
    The zero polynomial has degree :data:`ZERO_DEGREE`.
    """

    __slots__ = ("arity", "terms", "_degree", "_hash", "_compiled")

    def __init__(self, arity, terms=None):
        if arity < 0:
            raise ValueError("arity must be nonnegative")
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != arity:
                raise ArityMismatch(f"exponent vector {exps} does not match arity {arity}")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            c = rat(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.arity = arity
        self.terms = clean
        self._degree = max((sum(e) for e in clean), default=ZERO_DEGREE)
        self._hash = None
        self._compiled = None

    @classmethod
    def _raw(cls, arity, terms):
        obj = cls.__new__(cls)
        obj.arity = arity
        obj.terms = terms
        obj._degree = max((sum(e) for e in terms), default=ZERO_DEGREE)
        obj._hash = None
        obj._compiled = None
        return obj

    # construction helpers
    @classmethod
    def zero(cls, arity):
        return cls._raw(arity, {})

    @classmethod
    def constant(cls, arity, c):
        c = rat(c)
        return cls._raw(arity, {(0,) * arity: c} if c else {})

    @classmethod
    def var(cls, arity, i):
        exps = [0] * arity
        exps[i] = 1
        return cls._raw(arity, {tuple(exps): mpq(1)})

    @classmethod
    def variables(cls, arity):
        return [cls.var(arity, i) for i in range(arity)]

    @classmethod
    def from_univariate(cls, coeffs, arity=1, index=0):
        terms = {}
        for e, c in enumerate(coeffs):
            c = rat(c)
            if c:
                exps = [0] * arity
                exps[index] = e
                terms[tuple(exps)] = c
        return cls._raw(arity, terms)

    # basic properties
    @property
    def degree(self):
        return self._degree

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return self._degree <= 0

    def constant_value(self):
        return self.terms.get((0,) * self.arity, mpq(0))

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=ZERO_DEGREE)

    def depends_on(self, i):
        return any(e[i] for e in self.terms)

    def used_variables(self):
        return [i for i in range(self.arity) if self.depends_on(i)]

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.arity != self.arity:
                raise ArityMismatch(f"arity {self.arity} vs {other.arity}")
            return other
        return MultiPoly.constant(self.arity, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.arity, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = rat(other)
            if not c:
                return MultiPoly.zero(self.arity)
            return MultiPoly._raw(self.arity, {e: v * c for e, v in self.terms.items()})
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return MultiPoly._raw(self.arity, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.arity, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.arity == other.arity and self.terms == other.terms
        if isinstance(other, (int, Rat)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self.terms.items())))
        return self._hash

    # evaluation and substitution
    def _compile(self):
        if self._compiled is None:
            self._compiled = tuple(self.terms.items())
        return self._compiled

    def __call__(self, *point):
        return self.evaluate(point)

    def evaluate(self, point):
        """Exact value at ``point`` (a sequence of rationals or ints)."""
        if len(point) != self.arity:
            raise ArityMismatch(f"point of length {len(point)} for arity {self.arity}")
        total = mpq(0)
        powers = [None] * self.arity
        for exps, c in self._compile():
            term = c
            for i, e in enumerate(exps):
                if e:
                    cache = powers[i]
                    if cache is None:
                        cache = powers[i] = {}
                    v = cache.get(e)
                    if v is None:
                        v = cache[e] = point[i] ** e
                    term = term * v
            total += term
        return total

    def substitute(self, assignment, drop=False):
        """Fix the variables in ``assignment`` (a map index -> rational).

        With ``drop`` false the arity is kept and the fixed variables simply
        no longer occur; with ``drop`` true they are removed and the
        remaining variables are renumbered in order.
        """
        for i in assignment:
            if not 0 <= i < self.arity:
                raise ArityMismatch(f"variable index {i} outside arity {self.arity}")
        vals = {i: rat(v) for i, v in assignment.items()}
        keep = [i for i in range(self.arity) if i not in vals]
        out = {}
        for exps, c in self.terms.items():
            v = c
            for i, x in vals.items():
                e = exps[i]
                if e:
                    v = v * x**e
            if not v:
                continue
            if drop:
                key = tuple(exps[i] for i in keep)
            else:
                key = tuple(0 if i in vals else exps[i] for i in range(self.arity))
            s = out.get(key, 0) + v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return MultiPoly._raw(len(keep) if drop else self.arity, out)

    def compose(self, polys):
        """Substitute polynomials (all of one common arity) for the variables."""
        if len(polys) != self.arity:
            raise ArityMismatch("compose needs one polynomial per variable")
        target = polys[0].arity if polys else 0
        result = MultiPoly.zero(target)
        cache = {}
        for exps, c in self.terms.items():
            term = MultiPoly.constant(target, c)
            for i, e in enumerate(exps):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = polys[i] ** e
                    term = term * cache[key]
            result = result + term
        return result

    def extend(self, arity, positions):
        """Re-embed into ``arity`` variables; variable ``i`` goes to ``positions[i]``."""
        out = {}
        for exps, c in self.terms.items():
            new = [0] * arity
            for i, e in enumerate(exps):
                new[positions[i]] += e
            out[tuple(new)] = c
        return MultiPoly._raw(arity, out)

    def derivative(self, i):
        out = {}
        for exps, c in self.terms.items():
            e = exps[i]
            if e:
                new = list(exps)
                new[i] = e - 1
                out[tuple(new)] = c * e
        return MultiPoly._raw(self.arity, out)

    def coefficients_in(self, i):
        """List of coefficient polynomials (same arity, variable ``i`` absent) by power of ``i``."""
        d = self.degree_in(i)
        buckets = [dict() for _ in range(max(d + 1, 0))]
        for exps, c in self.terms.items():
            new = list(exps)
            new[i] = 0
            buckets[exps[i]][tuple(new)] = c
        return [MultiPoly._raw(self.arity, b) for b in buckets]

    def to_univariate(self, i=None):
        """Dense coefficient list; the polynomial must involve at most variable ``i``."""
        used = self.used_variables()
        if i is None:
            if len(used) > 1:
                raise ArityMismatch("polynomial is not univariate")
            i = used[0] if used else 0
        elif any(v != i for v in used):
            raise ArityMismatch("polynomial depends on other variables")
        if self.arity == 0:
            return upoly.trim([self.constant_value()])
        coeffs = [mpq(0)] * (max(self.degree_in(i), 0) + 1)
        for exps, c in self.terms.items():
            coeffs[exps[i]] += c
        return upoly.trim(coeffs)

    def to_bivariate(self, ix, iy):
        """``f`` as a list over powers of ``y`` of dense univariate polys in ``x``."""
        dy = self.degree_in(iy)
        out = [dict() for _ in range(max(dy + 1, 0))]
        for exps, c in self.terms.items():
            for j, e in enumerate(exps):
                if e and j not in (ix, iy):
                    raise ArityMismatch("polynomial depends on more than two variables")
            bucket = out[exps[iy]]
            bucket[exps[ix]] = bucket.get(exps[ix], 0) + c
        rows = []
        for b in out:
            if not b:
                rows.append([])
                continue
            row = [mpq(0)] * (max(b) + 1)
            for e, c in b.items():
                row[e] = c
            rows.append(upoly.trim(row))
        return rows

    def primitive(self):
        """Positive rational multiple with coprime integer coefficients (sign of the leading term kept)."""
        if not self.terms:
            return self
        from math import gcd, lcm

        den = 1
        for c in self.terms.values():
            den = lcm(den, int(c.denominator))
        nums = [int(c * den) for c in self.terms.values()]
        g = 0
        for v in nums:
            g = gcd(g, abs(v))
        factor = mpq(den, g)
        return self * factor

    def normalized(self):
        """Canonical representative of the zero set up to a nonzero scalar."""
        if not self.terms:
            return self
        p = self.primitive()
        lead_exps = max(p.terms)
        if p.terms[lead_exps] < 0:
            p = -p
        return p

    def max_abs_coeff(self):
        return max((abs(c) for c in self.terms.values()), default=mpq(0))

    # text form
    def to_text(self, names=None):
        return format_poly(self, names)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MultiPoly({self.arity}, {self.to_text()!r})"


def var_names(arity):
    return [f"x{i + 1}" for i in range(arity)]


def format_poly(p, names=None):
    """Term list ``coef * x1^e1 ... xk^ek`` joined by `` + ``/`` - ``.

    Coefficients use the canonical ``p/q`` form only when not integral.
    Terms are emitted in descending lexicographic exponent order.
    """
    names = names or var_names(p.arity)
    if not p.terms:
        return "0"
    pieces = []
    for exps in sorted(p.terms, reverse=True):
        c = p.terms[exps]
        mag = abs(c)
        coef = str(mag.numerator) if mag.denominator == 1 else format_rat(mag)
        monos = []
        for name, e in zip(names, exps):
            if e == 1:
                monos.append(name)
            elif e > 1:
                monos.append(f"{name}^{e}")
        body = " ".join([coef + " *"] + monos) if monos else coef
        if not pieces:
            pieces.append(("-" if c < 0 else "") + body)
        else:
            pieces.append(("- " if c < 0 else "+ ") + body)
    return " ".join(pieces)


_TERM_RE = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_poly(text, arity, names=None):
    """Parse the text form written by :func:`format_poly`.

    Each term is an optional coefficient (integer or ``p/q``), optionally
    followed by ``*`` and a space-separated list of ``name`` or ``name^e``.
    """
    names = names or var_names(arity)
    index = {n: i for i, n in enumerate(names)}
    text = text.strip()
    if not text:
        raise ParseError("empty polynomial")
    if text == "0":
        return MultiPoly.zero(arity)
    terms = {}
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"cannot parse polynomial near {text[pos:]!r}")
        sgn, body = m.group(1), m.group(2).strip()
        if sgn is None and not first:
            raise ParseError(f"missing operator before {body!r}")
        first = False
        pos = m.end()
        coef, exps = _parse_term(body, index, arity)
        if sgn == "-":
            coef = -coef
        terms[exps] = terms.get(exps, 0) + coef
    return MultiPoly(arity, terms)


def _parse_term(body, index, arity):
    from kpol.algebra.rat import parse_rat

    tokens = body.replace("*", " * ").split()
    if tokens and tokens[-1] == "*":
        raise ParseError(f"dangling '*' in term {body!r}")
    tokens = [t for t in tokens if t != "*"]
    coef = mpq(1)
    if tokens and re.match(r"^\d+(/\d+)?$", tokens[0]):
        head = tokens.pop(0)
        coef = parse_rat(head) if "/" in head else mpq(int(head))
    exps = [0] * arity
    for tok in tokens:
        name, _, e = tok.partition("^")
        if name not in index:
            raise ParseError(f"unknown variable {name!r}")
        try:
            power = int(e) if e else 1
        except ValueError as exc:
            raise ParseError(f"bad exponent in {tok!r}") from exc
        if power < 0:
            raise ParseError(f"negative exponent in {tok!r}")
        exps[index[name]] += power
    return coef, tuple(exps)


def poly_from_callable(arity, fn):
    """Build a polynomial by calling ``fn`` on the variable polynomials."""
    out = fn(*MultiPoly.variables(arity))
    if not isinstance(out, MultiPoly):
        out = MultiPoly.constant(arity, out)
    return out


def monomials(arity, max_degree):
    """All exponent vectors of total degree at most ``max_degree``."""
    return [e for e in _iproduct(range(max_degree + 1), repeat=arity) if sum(e) <= max_degree]
