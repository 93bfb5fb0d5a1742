"""
Shifting Operators
S_j zeta(s) = zeta(s) + (1-q) zeta(s with s_j lowered by one), expanded exactly
"""

from math import comb
from typing import Any, Sequence

from models.errors import DomainError
from models.zcombo import ONE_MINUS_Q, Word, ZCombo


def apply_shift(combo: ZCombo, index: int, power: int = 1) -> ZCombo:
    """Apply S_index^power (index is 1-based) to every word of a combination"""
    if power < 0:
        raise DomainError(f"shift power must be non-negative, got {power}")
    result = ZCombo()
    for word, coeff in combo.items():
        if not 1 <= index <= len(word):
            raise DomainError(f"shift index {index} out of range for depth {len(word)}")
        for r in range(power + 1):
            shifted = word.replace(index - 1, word[index - 1] - r)
            result = result + ZCombo.single(shifted, coeff * comb(power, r) * ONE_MINUS_Q ** r)
    return result


def shift_expand(s: Sequence[Any], n: Sequence[int]) -> ZCombo:
    """
    S_1^{n_1} ... S_d^{n_d} zeta(s) as the formal combination
    sum_{r <= n} prod_j C(n_j, r_j) (1-q)^{r_j} zeta(s - r).
    """
    word = s if isinstance(s, Word) else Word(s)
    if len(word) != len(n):
        raise DomainError(f"depth mismatch: {len(word)} letters, {len(n)} shift powers")
    combo = ZCombo.single(word)
    for index, power in enumerate(n, start=1):
        combo = apply_shift(combo, index, int(power))
    return combo
