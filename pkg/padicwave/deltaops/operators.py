from __future__ import annotations

import math

from padicwave.arith.scalar import PadicScalar
from padicwave.core.enums import Relation
from padicwave.core.exceptions import InvalidParametersError, NotTopDegreeError, PrecisionExhaustedError
from padicwave.deltaops.poly import GlobalPoly, PolyTable
from padicwave.fields.embeddings import Embedding, embedded_images, embeddings
from padicwave.multiindex.index import MultiIndex, index_set, monomial_eval


def _position(P: GlobalPoly, tau: Embedding | int) -> int:
    if isinstance(tau, int):
        if not 0 <= tau < P.dim:
            raise InvalidParametersError(f"embedding index {tau} outside [0, {P.dim})")
        return tau
    return embeddings(P.field).index(tau)


def delta_tau(P: GlobalPoly, tau: Embedding | int, h: int) -> GlobalPoly:
    """Δ_{τ,h}P(z): P with τ(z) shifted by τ(ϖ^h), minus P.

    Each z^m contributes Σ_{n=1}^{m_τ} binom(m_τ, n) τ(ϖ^h)^n z^{m - n e_τ}.
    """
    if h < 0:
        raise InvalidParametersError(f"h must be non-negative, got {h}")
    s = _position(P, tau)
    step = embedded_images(PadicScalar.uniformizer(P.field) ** h)[s]
    out: PolyTable = {}
    for m, c in P.coeffs.items():
        for n in range(1, m[s] + 1):
            key = m.minus(MultiIndex.unit(P.dim, s, n))
            term = c * step**n * math.comb(m[s], n)
            out[key] = term if key not in out else out[key] + term
    return GlobalPoly.build(P.field, out)


def delta_multi(P: GlobalPoly, m: MultiIndex | tuple[int, ...], h: int, verify: bool = False) -> GlobalPoly:
    """Δ_{m,h} = Δ_{σ_1,h}^{m_1} ∘ ... ∘ Δ_{σ_d,h}^{m_d}, applied in embedding order.

    With ``verify`` the reverse order is computed too; a disagreement raises
    PrecisionExhaustedError.
    """
    idx = MultiIndex(m)
    result = P
    for s, count in enumerate(idx):
        for _ in range(count):
            result = delta_tau(result, s, h)
    if verify:
        other = P
        for s in reversed(range(idx.dim)):
            for _ in range(idx[s]):
                other = delta_tau(other, s, h)
        if other != result:
            raise PrecisionExhaustedError(f"Δ_{{{idx},{h}}} depends on the order of the embeddings at this precision")
    return result


def recover_leading(P: GlobalPoly, m: MultiIndex | tuple[int, ...], h: int, z: PadicScalar) -> PadicScalar:
    """a_m = Δ_{m,h}P(z) / (ϖ^h)^m for P = Σ a_i z^i / i! and |m| the top degree.

    Raises
    ------
    NotTopDegreeError
        If |m| is below the total degree of P.
    """
    idx = MultiIndex(m)
    if idx.total < P.degree:
        raise NotTopDegreeError(f"|{tuple(idx)}| = {idx.total} is below the degree {P.degree}")
    value = delta_multi(P, idx, h).evaluate(z)
    return value / monomial_eval(PadicScalar.uniformizer(P.field) ** h, idx)


def recover_all(P: GlobalPoly, h: int, z: PadicScalar) -> PolyTable:
    """Every divided-power coefficient, recovering the top layer and peeling it off."""
    found: PolyTable = {}
    rest = P
    while not rest.is_zero:
        top = rest.degree
        layer = {m: recover_leading(rest, m, h, z) for m in index_set(Relation.EQ, top, P.dim)}
        layer = {m: a for m, a in layer.items() if not a.is_zero}
        if not layer:
            raise InvalidParametersError(f"no coefficient recovered at degree {top}")
        found.update(layer)
        rest = rest - GlobalPoly.from_divided_powers(P.field, layer)
    return dict(sorted(found.items(), key=lambda kv: kv[0].sort_key()))
