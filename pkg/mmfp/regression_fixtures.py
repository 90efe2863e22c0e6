"""
Published mod-p eigenform data for the regression run
Each case: an Eisenstein series E_k mod p, its filtration, its eigensystem on the
first eleven primes l != p, and the cusp eigenform carrying the same eigensystem
(nonzero coefficients a_1 .. a_37; every other coefficient is 0).
"""
from typing import Dict, List

EXPANSION_LENGTH = 37

REGRESSION_CASES = {
    'p5_E4': {
        'p': 5,
        'k': 4,
        'filtration': 0,
        'matched_weight': 24,
        'eigensystem': (4, 3, 4, 2, 3, 4, 0, 3, 0, 2, 4),
        'expansion': {
            1: 1, 2: 4, 3: 3, 4: 3, 6: 2, 7: 4, 9: 2, 11: 2, 12: 4, 13: 3, 14: 1,
            16: 1, 17: 4, 18: 3, 21: 2, 22: 3, 23: 3, 26: 2, 28: 2, 31: 2, 32: 4,
            33: 1, 34: 1, 36: 1, 37: 4,
        },
    },
    'p5_E6': {
        'p': 5,
        'k': 6,
        'filtration': 6,
        'matched_weight': 30,
        'eigensystem': (3, 4, 3, 2, 4, 3, 0, 4, 0, 2, 3),
        'expansion': {
            1: 1, 2: 3, 3: 4, 4: 2, 6: 2, 7: 3, 9: 3, 11: 2, 12: 3, 13: 4, 14: 4,
            16: 1, 17: 3, 18: 4, 21: 2, 22: 1, 23: 4, 26: 2, 28: 1, 31: 2, 32: 3,
            33: 3, 34: 4, 36: 1, 37: 3,
        },
    },
    'p7_E4': {
        'p': 7,
        'k': 4,
        'filtration': 4,
        'matched_weight': 52,
        'eigensystem': (2, 0, 0, 2, 0, 0, 0, 2, 2, 0, 2),
        'expansion': {
            1: 1, 2: 2, 4: 3, 8: 4, 9: 1, 11: 2, 16: 5, 18: 2, 22: 4, 23: 2, 25: 1,
            29: 2, 32: 6, 36: 3, 37: 2,
        },
    },
    'p7_E6': {
        'p': 7,
        'k': 6,
        'filtration': 0,
        'matched_weight': 48,
        'eigensystem': (5, 6, 4, 3, 0, 6, 4, 5, 2, 6, 5),
        'expansion': {
            1: 1, 2: 5, 3: 6, 5: 4, 6: 2, 8: 1, 9: 3, 10: 6, 11: 3, 15: 3, 16: 5,
            17: 6, 18: 1, 19: 4, 22: 1, 23: 5, 24: 6, 25: 6, 27: 2, 29: 2, 30: 1,
            31: 6, 33: 4, 34: 2, 37: 5,
        },
    },
    'p7_E8': {
        'p': 7,
        'k': 8,
        'filtration': 8,
        'matched_weight': 56,
        'eigensystem': (3, 4, 6, 5, 0, 4, 6, 3, 2, 4, 3),
        'expansion': {
            1: 1, 2: 3, 3: 4, 5: 6, 6: 5, 8: 1, 9: 6, 10: 4, 11: 5, 15: 3, 16: 3,
            17: 4, 18: 4, 19: 6, 22: 1, 23: 3, 24: 4, 25: 3, 27: 5, 29: 2, 30: 2,
            31: 4, 33: 6, 34: 5, 37: 3,
        },
    },
}


def expected_coefficients(name: str) -> List[int]:
    """a_1 .. a_37 of a regression case with the unprinted zeros filled in."""
    expansion: Dict[int, int] = REGRESSION_CASES[name]['expansion']
    return [expansion.get(n, 0) for n in range(1, EXPANSION_LENGTH + 1)]
