"""
Formal Zeta Combinations
Words of complex exponents and finite combinations with coefficients in Q[q]
"""

from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

import sympy
from mpmath import mpc, mpf

from models.errors import DomainError

Q = sympy.Symbol("q")


# ==================== LETTERS ====================

def to_letter(value: Any) -> sympy.Expr:
    """
    Convert an exponent to an exact letter.
    Letters are linear sympy expressions: integers, rationals, named symbols and I.
    """
    if isinstance(value, sympy.Basic):
        return sympy.sympify(value)
    if isinstance(value, bool):
        raise TypeError("boolean is not a letter")
    if isinstance(value, int):
        return sympy.Integer(value)
    if isinstance(value, float):
        return sympy.Rational(repr(value))
    if isinstance(value, str):
        return sympy.sympify(value, rational=True)
    if isinstance(value, mpf):
        man, exp = value.man_exp
        return sympy.Integer(man) * sympy.Rational(2) ** exp
    if isinstance(value, (mpc, complex)):
        z = mpc(value)
        return to_letter(z.real) + sympy.I * to_letter(z.imag)
    raise TypeError(f"cannot build a letter from {type(value).__name__}")


def _rational_to_mpf(value: sympy.Rational) -> mpf:
    return mpf(int(value.p)) / int(value.q)


def letter_value(letter: sympy.Expr, bindings: Optional[Mapping[str, Any]] = None) -> mpc:
    """Evaluate a linear letter; named symbols must be bound"""
    bindings = bindings or {}
    total = mpc(0)
    for basis, coeff in sympy.expand(letter).as_coefficients_dict().items():
        if not coeff.is_Rational:
            raise DomainError(f"letter {letter} has a non-rational coefficient")
        c = _rational_to_mpf(coeff)
        if basis == 1:
            total += c
        elif basis == sympy.I:
            total += mpc(0, c)
        elif isinstance(basis, sympy.Symbol):
            if basis.name not in bindings:
                raise DomainError(f"letter {letter}: symbol {basis.name} is unbound")
            total += c * mpc(bindings[basis.name])
        else:
            raise DomainError(f"letter {letter} is not linear")
    return total


# ==================== WORDS ====================

class Word:
    """Immutable sequence of letters (possibly empty)"""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Any] = ()):
        self.letters: Tuple[sympy.Expr, ...] = tuple(to_letter(a) for a in letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[sympy.Expr]:
        return iter(self.letters)

    def __getitem__(self, index: int) -> sympy.Expr:
        return self.letters[index]

    def __hash__(self) -> int:
        return hash(self.letters)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __repr__(self) -> str:
        return f"Word({self.text()})"

    def tail(self) -> "Word":
        return Word(self.letters[1:])

    def prepend(self, letter: Any) -> "Word":
        return Word((to_letter(letter),) + self.letters)

    def replace(self, index: int, letter: Any) -> "Word":
        letters = list(self.letters)
        letters[index] = to_letter(letter)
        return Word(letters)

    def text(self) -> str:
        return ",".join(str(a) for a in self.letters)

    def sort_key(self) -> Tuple[int, str]:
        return (len(self.letters), self.text())

    def evaluate(self, bindings: Optional[Mapping[str, Any]] = None) -> Tuple[mpc, ...]:
        return tuple(letter_value(a, bindings) for a in self.letters)


# ==================== COEFFICIENTS ====================

def as_poly(coeff: Any) -> sympy.Poly:
    if isinstance(coeff, sympy.Poly):
        return coeff
    return sympy.Poly(sympy.sympify(coeff), Q, domain=sympy.QQ)


ONE_MINUS_Q = as_poly(1 - Q)
Q_MINUS_ONE = as_poly(Q - 1)


def evaluate_poly(poly: sympy.Poly, q: Any) -> mpf:
    """Horner evaluation of an exact polynomial at a numeric q"""
    value = mpf(0)
    x = mpf(q)
    for c in poly.all_coeffs():
        value = value * x + _rational_to_mpf(sympy.Rational(c))
    return value


# ==================== COMBINATIONS ====================

class ZCombo:
    """
    Finite linear combination of words with coefficients in Q[q].
    Canonical: one entry per word, zero coefficients dropped. Operations return new objects.
    """

    def __init__(self, terms: Optional[Mapping[Word, Any]] = None):
        self._terms: Dict[Word, sympy.Poly] = {}
        for word, coeff in (terms or {}).items():
            self._accumulate(word, as_poly(coeff))

    @classmethod
    def single(cls, word: Any, coeff: Any = 1) -> "ZCombo":
        if not isinstance(word, Word):
            word = Word(word)
        return cls({word: coeff})

    @classmethod
    def unit(cls) -> "ZCombo":
        return cls.single(Word())

    def _accumulate(self, word: Word, poly: sympy.Poly) -> None:
        current = self._terms.get(word)
        total = poly if current is None else current + poly
        if total.is_zero:
            self._terms.pop(word, None)
        else:
            self._terms[word] = total

    def __add__(self, other: "ZCombo") -> "ZCombo":
        result = ZCombo()
        result._terms = dict(self._terms)
        for word, poly in other._terms.items():
            result._accumulate(word, poly)
        return result

    def __sub__(self, other: "ZCombo") -> "ZCombo":
        return self + other.scale(-1)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ZCombo) and self._terms == other._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __repr__(self) -> str:
        return f"ZCombo({'; '.join(self.to_text().splitlines())})"

    def scale(self, factor: Any) -> "ZCombo":
        f = as_poly(factor)
        result = ZCombo()
        for word, poly in self._terms.items():
            result._accumulate(word, poly * f)
        return result

    def prepend(self, letter: Any) -> "ZCombo":
        result = ZCombo()
        for word, poly in self._terms.items():
            result._accumulate(word.prepend(letter), poly)
        return result

    def items(self) -> List[Tuple[Word, sympy.Poly]]:
        """Terms in canonical order (by length, then letter text)"""
        return sorted(self._terms.items(), key=lambda item: item[0].sort_key())

    def words(self) -> List[Word]:
        return [w for w, _ in self.items()]

    def coefficient(self, word: Any) -> sympy.Poly:
        if not isinstance(word, Word):
            word = Word(word)
        return self._terms.get(word, as_poly(0))

    def specialize(self, q_value: Any = 1) -> Dict[Word, sympy.Rational]:
        """Substitute a rational q into every coefficient, dropping zeros"""
        point = sympy.Rational(q_value)
        out: Dict[Word, sympy.Rational] = {}
        for word, poly in self._terms.items():
            value = sympy.Rational(poly.eval(point))
            if value != 0:
                out[word] = value
        return out

    def to_text(self) -> str:
        """Canonical text: one 'coefficient: letters' line per term"""
        return "\n".join(f"{poly.as_expr()}: {word.text()}" for word, poly in self.items())

    def to_dict(self) -> List[Dict[str, str]]:
        return [{"coefficient": str(poly.as_expr()), "word": word.text()} for word, poly in self.items()]
