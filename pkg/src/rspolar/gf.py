"""Arithmetic over GF(2^t) in polynomial basis.

Field elements are plain Python ints in [0, 2^t); addition is bitwise XOR.
Multiplication and inversion go through log/antilog tables built from a
primitive polynomial, with a table-free carry-less reduction kept around as
an independent oracle for tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Conventional primitive polynomials (LSB = constant term), degree 2..16.
DEFAULT_PRIMITIVE_POLYS = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


def mul_nolut(a: int, b: int, t: int, prim_poly: int) -> int:
    """Carry-less polynomial multiply of a and b reduced mod prim_poly.

    Independent of the log/antilog tables; used as the test oracle.
    """
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a & (1 << t):
            a ^= prim_poly
    return acc


@dataclass(frozen=True)
class GFContext:
    """The field GF(2^t): tables plus scalar helpers.

    Parameters
    ----------
    t : int
        Extension degree, 2 <= t <= 16.
    prim_poly : int, optional
        Primitive polynomial of degree exactly t as a (t+1)-bit integer.
        Defaults to the conventional polynomial for t.

    Raises
    ------
    ValueError
        If the polynomial has the wrong degree or is not primitive (the
        generated cyclic group of x must have order 2^t - 1).
    """

    t: int
    prim_poly: int
    q: int = field(init=False)
    log_table: np.ndarray = field(init=False, repr=False)
    antilog_table: np.ndarray = field(init=False, repr=False)

    def __init__(self, t: int, prim_poly: int | None = None):
        if not 2 <= t <= 16:
            raise ValueError(f"t must be in [2, 16], got {t}")
        if prim_poly is None:
            prim_poly = DEFAULT_PRIMITIVE_POLYS[t]
        if prim_poly.bit_length() != t + 1:
            raise ValueError(
                f"prim_poly 0x{prim_poly:x} does not have degree exactly {t}")
        q = 1 << t
        # antilog[i] = x^i; doubled so products of logs need no modulo.
        antilog = np.zeros(2 * (q - 1), dtype=np.int32)
        log = np.full(q, -1, dtype=np.int32)
        x = 1
        for i in range(q - 1):
            if log[x] != -1:
                # x repeats before covering the group: not primitive.
                raise ValueError(
                    f"0x{prim_poly:x} is not primitive over GF(2^{t})")
            antilog[i] = x
            log[x] = i
            x = mul_nolut(x, 2, t, prim_poly)
        if x != 1 or np.any(log[1:] == -1):
            raise ValueError(f"0x{prim_poly:x} is not primitive over GF(2^{t})")
        antilog[q - 1:] = antilog[:q - 1]
        antilog.setflags(write=False)
        log.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "prim_poly", prim_poly)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "log_table", log)
        object.__setattr__(self, "antilog_table", antilog)

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return int(self.antilog_table[self.log_table[a] + self.log_table[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(2^t)")
        return int(self.antilog_table[self.q - 1 - self.log_table[a]])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        """a^e with e any integer (negative allowed for a != 0)."""
        if a == 0:
            if e <= 0:
                raise ZeroDivisionError("0^e undefined for e <= 0")
            return 0
        return int(self.antilog_table[(int(self.log_table[a]) * e) % (self.q - 1)])

    def alpha_pow(self, e: int) -> int:
        """alpha^e where alpha = x, the primitive element."""
        return int(self.antilog_table[e % (self.q - 1)])

    def to_bits(self, sym: int) -> np.ndarray:
        """Binary image of a symbol: t little-endian coefficient bits."""
        return (sym >> np.arange(self.t)) & 1

    def from_bits(self, bits) -> int:
        bits = np.asarray(bits)
        return int((bits.astype(np.int64) << np.arange(self.t)).sum())
