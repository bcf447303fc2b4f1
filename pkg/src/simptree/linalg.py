"""Exact rank of sparse integer matrices over Q or GF(p).

Rows are dicts ``{column: value}``.  Over characteristic 0 the elimination
is fraction-free: rows stay integral and are divided by their content after
every update, so entries never grow beyond what the pivot products force.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_characteristic(char: int) -> int:
    if char != 0 and not _is_prime(char):
        raise ValueError(f"characteristic must be 0 or a prime, got {char}")
    return char


def _reduce_modp(row: dict, pivots: dict, p: int) -> dict:
    while row:
        lead = min(row)
        piv = pivots.get(lead)
        if piv is None:
            return row
        f = row[lead]
        for c, v in piv.items():
            nv = (row.get(c, 0) - f * v) % p
            if nv:
                row[c] = nv
            else:
                row.pop(c, None)
    return row


def _reduce_q(row: dict, pivots: dict) -> dict:
    while row:
        lead = min(row)
        piv = pivots.get(lead)
        if piv is None:
            return row
        a = piv[lead]
        b = row[lead]
        g = gcd(a, b)
        ma, mb = a // g, b // g
        new = {}
        for c, v in row.items():
            new[c] = v * ma
        for c, v in piv.items():
            nv = new.get(c, 0) - v * mb
            if nv:
                new[c] = nv
            else:
                new.pop(c, None)
        if new:
            cont = 0
            for v in new.values():
                cont = gcd(cont, v)
                if cont == 1:
                    break
            if cont > 1:
                new = {c: v // cont for c, v in new.items()}
        row = new
    return row


def rank(rows: Iterable[dict], char: int = 0) -> int:
    """Rank of the matrix whose rows are given as sparse dicts."""
    pivots: dict = {}
    for r in rows:
        if char:
            row = {c: v % char for c, v in r.items() if v % char}
            row = _reduce_modp(row, pivots, char)
            if row:
                lead = min(row)
                inv = pow(row[lead], -1, char)
                pivots[lead] = {c: (v * inv) % char for c, v in row.items()}
        else:
            row = {c: v for c, v in r.items() if v}
            row = _reduce_q(row, pivots)
            if row:
                pivots[min(row)] = row
    return len(pivots)
