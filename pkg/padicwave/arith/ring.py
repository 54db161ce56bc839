"""Integer-level arithmetic for O_F = Z_q[ϖ], ϖ^e = p.

An element of the unramified ring Z_q = Z_p[x]/(g) is a tuple of ``f``
integers (coefficients of 1, x, ..., x^{f-1}). An element of O_F is a
*block*: ``e`` such tuples ``(c_0, ..., c_{e-1})`` standing for
Σ c_i ϖ^i. Blocks are reduced canonically modulo ϖ^N by reducing c_i
modulo p^{ceil((N - i) / e)}.
"""

from __future__ import annotations

import itertools
import threading
from functools import lru_cache

from padicwave.core.exceptions import UnsupportedFieldError
from padicwave.core.types import Block
from padicwave.fields.descriptor import FieldDescriptor
from padicwave.logger import BoundLogger, get_logger

logger: BoundLogger = get_logger(__name__)

type Zq = tuple[int, ...]


def vp_int(n: int, p: int) -> int | None:
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _poly_rem_mod(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a by monic b over F_p; coefficients low to high."""
    a = [c % p for c in a]
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c:
            for i in range(db + 1):
                a[k - db + i] = (a[k - db + i] - c * b[i]) % p
    return a[:db]


def first_irreducible(p: int, f: int) -> tuple[int, ...]:
    """First monic irreducible polynomial of degree f over F_p, low-to-high coefficients with leading 1."""
    if f == 1:
        return (0, 1)
    for k in range(p**f):
        low = [(k // p**i) % p for i in range(f)]
        if low[0] == 0:
            continue
        g = [*low, 1]
        reducible = False
        for deg in range(1, f // 2 + 1):
            for tail in itertools.product(range(p), repeat=deg):
                divisor = [*tail, 1]
                if not any(_poly_rem_mod(g, divisor, p)):
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            return tuple(g)
    raise UnsupportedFieldError(f"no irreducible polynomial of degree {f} over F_{p}")


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = [ell for ell in range(2, p) if (p - 1) % ell == 0 and all(ell % m for m in range(2, ell))]
    for g in range(2, p):
        if all(pow(g, (p - 1) // ell, p) != 1 for ell in factors):
            return g
    raise UnsupportedFieldError(f"no primitive root modulo {p}")


class FieldContext:
    """Precomputed arithmetic data for one :class:`FieldDescriptor`.

    Holds the Z_q modulus, Teichmüller lifts, the Frobenius images of the
    generator x and the e-th root of unity that realizes the twists of ϖ.
    """

    def __init__(self, descriptor: FieldDescriptor) -> None:
        if not descriptor.is_tame:
            raise UnsupportedFieldError(
                f"e={descriptor.e} does not divide p-1={descriptor.p - 1}; only tame fields are supported"
            )
        self.descriptor = descriptor
        self.p = descriptor.p
        self.f = descriptor.f
        self.e = descriptor.e
        self.d = descriptor.d
        self.q = descriptor.q
        self.precision = descriptor.precision
        self.zq_digits = -(-self.precision // self.e) + 1
        self.zq_modulus = self.p**self.zq_digits
        self.modulus = first_irreducible(self.p, self.f)
        self._pows = [self.p**k for k in range(self.zq_digits + 2)]
        self._teich: dict[int, Zq] = {}
        self._lock = threading.Lock()
        self._frobenius_powers = self._compute_frobenius_powers()
        self.zeta = self._compute_zeta()
        self._zeta_powers = [pow(self.zeta, k, self.zq_modulus) for k in range(self.e)]
        logger.debug(
            "field.context.created",
            p=self.p,
            f=self.f,
            e=self.e,
            modulus=self.modulus,
            zeta=self.zeta % self.p,
        )

    def ppow(self, k: int) -> int:
        if k <= 0:
            return 1
        if k < len(self._pows):
            return self._pows[k]
        return self.p**k

    # Z_q level

    def zq_zero(self) -> Zq:
        return (0,) * self.f

    def zq_const(self, n: int) -> Zq:
        return (n,) + (0,) * (self.f - 1)

    def zq_add(self, a: Zq, b: Zq) -> Zq:
        return tuple(x + y for x, y in zip(a, b, strict=True))

    def zq_sub(self, a: Zq, b: Zq) -> Zq:
        return tuple(x - y for x, y in zip(a, b, strict=True))

    def zq_scale(self, a: Zq, n: int) -> Zq:
        return tuple(x * n for x in a)

    def _reduce_poly(self, coeffs: list[int]) -> Zq:
        f = self.f
        g = self.modulus
        for k in range(len(coeffs) - 1, f - 1, -1):
            c = coeffs[k]
            if c:
                for i in range(f):
                    coeffs[k - f + i] -= c * g[i]
        return tuple(coeffs[:f])

    def zq_mul(self, a: Zq, b: Zq) -> Zq:
        if self.f == 1:
            return (a[0] * b[0],)
        prod = [0] * (2 * self.f - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        return self._reduce_poly(prod)

    def zq_mod(self, a: Zq, k: int) -> Zq:
        m = self.ppow(k)
        return tuple(x % m for x in a)

    def zq_vp(self, a: Zq) -> int | None:
        vals = [v for v in (vp_int(x, self.p) for x in a) if v is not None]
        return min(vals) if vals else None

    def zq_pow(self, a: Zq, n: int, k: int) -> Zq:
        result = self.zq_mod(self.zq_const(1), k)
        base = self.zq_mod(a, k)
        while n:
            if n & 1:
                result = self.zq_mod(self.zq_mul(result, base), k)
            base = self.zq_mod(self.zq_mul(base, base), k)
            n >>= 1
        return result

    def zq_inverse(self, a: Zq, k: int) -> Zq:
        """Inverse of a unit of Z_q modulo p^k."""
        r = self.zq_mod(a, 1)
        y = self.zq_pow(r, self.q - 2, 1) if self.q > 2 else r
        two = self.zq_const(2)
        prec = 1
        while prec < k:
            prec = min(2 * prec, k)
            y = self.zq_mod(self.zq_mul(y, self.zq_sub(two, self.zq_mul(a, y))), prec)
        return self.zq_mod(y, k)

    # residue field

    def residue_index(self, a: Zq) -> int:
        return sum((x % self.p) * self.p**j for j, x in enumerate(a))

    def residue_lift(self, t: int) -> Zq:
        """Integer-digit lift of the residue class with index t."""
        return tuple((t // self.p**j) % self.p for j in range(self.f))

    def teichmuller_zq(self, t: int) -> Zq:
        """The (q-1)-th root of unity (or 0) lifting residue index t, modulo p^zq_digits."""
        if t == 0:
            return self.zq_zero()
        cached = self._teich.get(t)
        if cached is not None:
            return cached
        omega = self.residue_lift(t)
        while True:
            nxt = self.zq_pow(omega, self.q, self.zq_digits)
            if nxt == omega:
                break
            omega = nxt
        with self._lock:
            self._teich.setdefault(t, omega)
        return omega

    # Frobenius and roots of unity

    def _zq_eval_poly(self, coeffs: tuple[int, ...], xi: Zq) -> Zq:
        acc = self.zq_zero()
        for c in reversed(coeffs):
            acc = self.zq_mod(self.zq_add(self.zq_mul(acc, xi), self.zq_const(c)), self.zq_digits)
        return acc

    def _compute_frobenius_powers(self) -> list[list[Zq]]:
        f = self.f
        identity = [tuple(1 if i == j else 0 for i in range(f)) for j in range(f)]
        if f == 1:
            return [identity]
        k = self.zq_digits
        generator = tuple(1 if i == 1 else 0 for i in range(f))
        xi = self.zq_pow(generator, self.p, k)
        g = self.modulus
        dg = tuple(i * g[i] for i in range(1, len(g)))
        for _ in range(k.bit_length() + 2):
            num = self._zq_eval_poly(g, xi)
            den = self._zq_eval_poly(dg, xi)
            xi = self.zq_mod(self.zq_sub(xi, self.zq_mul(num, self.zq_inverse(den, k))), k)
        images: list[Zq] = [generator, xi]
        for _ in range(2, f):
            prev = images[-1]
            images.append(self._substitute(prev, xi))
        return [[self.zq_pow(img, n, k) for n in range(f)] for img in images]

    def _substitute(self, a: Zq, xi: Zq) -> Zq:
        """Apply the ring map x -> xi to a."""
        acc = self.zq_zero()
        power = self.zq_const(1)
        for c in a:
            acc = self.zq_add(acc, self.zq_scale(power, c))
            power = self.zq_mod(self.zq_mul(power, xi), self.zq_digits)
        return self.zq_mod(acc, self.zq_digits)

    def _compute_zeta(self) -> int:
        if self.e == 1:
            return 1
        t0 = pow(primitive_root(self.p), (self.p - 1) // self.e, self.p)
        omega = t0
        while True:
            nxt = pow(omega, self.p, self.zq_modulus)
            if nxt == omega:
                return omega
            omega = nxt

    def frobenius(self, a: Zq, j: int) -> Zq:
        if j % self.f == 0:
            return a
        powers = self._frobenius_powers[j % self.f]
        acc = self.zq_zero()
        for c, pw in zip(a, powers, strict=True):
            if c:
                acc = self.zq_add(acc, self.zq_scale(pw, c))
        return self.zq_mod(acc, self.zq_digits)

    def zeta_power(self, n: int) -> int:
        return self._zeta_powers[n % self.e]

    # blocks

    def block_zero(self) -> Block:
        return (self.zq_zero(),) * self.e

    def block_const(self, n: int) -> Block:
        return (self.zq_const(n),) + (self.zq_zero(),) * (self.e - 1)

    def block_from_zq(self, a: Zq) -> Block:
        return (a,) + (self.zq_zero(),) * (self.e - 1)

    def block_add(self, a: Block, b: Block) -> Block:
        return tuple(self.zq_add(x, y) for x, y in zip(a, b, strict=True))

    def block_sub(self, a: Block, b: Block) -> Block:
        return tuple(self.zq_sub(x, y) for x, y in zip(a, b, strict=True))

    def block_neg(self, a: Block) -> Block:
        return tuple(self.zq_scale(x, -1) for x in a)

    def block_mul(self, a: Block, b: Block) -> Block:
        e = self.e
        out = [self.zq_zero() for _ in range(e)]
        for i, ai in enumerate(a):
            if not any(ai):
                continue
            for j, bj in enumerate(b):
                if not any(bj):
                    continue
                prod = self.zq_mul(ai, bj)
                s = i + j
                if s >= e:
                    prod = self.zq_scale(prod, self.p)
                    s -= e
                out[s] = self.zq_add(out[s], prod)
        return tuple(out)

    def block_reduce(self, a: Block, n: int) -> Block:
        """Canonical representative modulo ϖ^n."""
        e = self.e
        return tuple(self.zq_mod(c, -((i - n) // e)) if n > i else self.zq_zero() for i, c in enumerate(a))

    def block_valuation(self, a: Block, n: int) -> int | None:
        """Valuation in ϖ-digits of a block known modulo ϖ^n; None when it vanishes there."""
        best: int | None = None
        for i, c in enumerate(a):
            v = self.zq_vp(c)
            if v is None:
                continue
            w = self.e * v + i
            if best is None or w < best:
                best = w
        if best is None or best >= n:
            return None
        return best

    def block_shift_up(self, a: Block, s: int) -> Block:
        """Multiply by ϖ^s."""
        e = self.e
        whole, rest = divmod(s, e)
        out = list(a)
        for _ in range(rest):
            out = [self.zq_scale(out[-1], self.p), *out[:-1]]
        if whole:
            scale = self.ppow(whole)
            out = [self.zq_scale(c, scale) for c in out]
        return tuple(out)

    def block_shift_down(self, a: Block, s: int) -> Block:
        """Divide by ϖ^s; the block must have valuation at least s."""
        e = self.e
        whole, rest = divmod(s, e)
        out = list(a)
        if whole:
            scale = self.ppow(whole)
            out = [tuple(x // scale for x in c) for c in out]
        for _ in range(rest):
            out = [*out[1:], tuple(x // self.p for x in out[0])]
        return tuple(out)

    def block_unit_inverse(self, u: Block, n: int) -> Block:
        """Inverse of a unit block modulo ϖ^n."""
        r = self.zq_mod(u[0], 1)
        rinv = self.zq_pow(r, self.q - 2, 1) if self.q > 2 else r
        y = self.block_from_zq(rinv)
        two = self.block_const(2)
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            y = self.block_reduce(self.block_mul(y, self.block_sub(two, self.block_mul(u, y))), prec)
        return self.block_reduce(y, n)

    def block_embed(self, a: Block, j: int, k: int) -> Block:
        """Image of Σ c_i ϖ^i under Frobenius^j on coefficients and ϖ -> ζ^k ϖ."""
        out: list[Zq] = []
        for i, c in enumerate(a):
            image = self.frobenius(c, j)
            twist = self.zeta_power(k * i)
            if twist != 1:
                image = self.zq_mod(self.zq_scale(image, twist), self.zq_digits)
            out.append(image)
        return tuple(out)

    def block_residue(self, a: Block) -> int:
        return self.residue_index(a[0])


@lru_cache(maxsize=64)
def field_context(descriptor: FieldDescriptor) -> FieldContext:
    return FieldContext(descriptor)
