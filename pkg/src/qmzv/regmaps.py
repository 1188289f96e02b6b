"""Regularization, the involutions tau and swap, the embedding into
{p, y}-words, and the isomorphism phi_sharp between Ybi-words and B-words.

Words in B^0 are the B-words that do not start with b_0; every such word
has the block form b_{k1} b0^{m1} ... b_{kd} b0^{md}.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct

from .quasishuffle import (
    BALANCED_B, SHUFFLE, STUFFLE_Y, ProductInstance, _qsh_words, instance,
)
from .words import (
    B, PY, X01, Y, YBI, EMPTY, Letter, LinComb, Word, as_lincomb, b_blocks,
    from_b_blocks, tensor_map, delta_dec,
)

B0 = Letter(B, (0,))


class LeadingZeroError(ValueError):
    """The word starts with b_0 and is outside B^0."""


def _require_b0_free(w: Word) -> None:
    if w and w[0] == B0:
        raise LeadingZeroError(f"word starts with b0: {w}")


# --- reg_T^{-1}: elimination ------------------------------------------------

SPECIAL_LETTER = {
    BALANCED_B.id: B0,
    STUFFLE_Y.id: Letter(Y, (1,)),
    SHUFFLE.id: Letter(X01, (1,)),
}


@lru_cache(maxsize=None)
def _reg_T_inv_word(inst: ProductInstance, e: Letter, w: tuple) -> tuple:
    # returns a tuple of (n, ((word, coef), ...)) pairs
    m0 = 0
    while m0 < len(w) and w[m0] == e:
        m0 += 1
    if m0 == 0:
        return ((0, ((w, Fraction(1)),)),)
    u = w[1:]
    prod = _qsh_words(inst, u, (e,))
    acc: dict = {}

    def add(n, word, c):
        d = acc.setdefault(n, {})
        v = d.get(word, 0) + c
        if v:
            d[word] = v
        else:
            d.pop(word, None)

    for n, terms in _reg_T_inv_word(inst, e, u):
        for word, c in terms:
            add(n + 1, word, c)
    for other, c in prod.items():
        if other == w:
            continue
        for n, terms in _reg_T_inv_word(inst, e, other):
            for word, c2 in terms:
                add(n, word, -c * c2)
    lead = prod[w]
    return tuple(
        (n, tuple((word, c / lead) for word, c in sorted(d.items())))
        for n, d in sorted(acc.items()) if d
    )


def reg_T_inverse(x, inst=BALANCED_B, special: Letter | None = None) -> dict[int, LinComb]:
    """Write x as a polynomial in T with coefficients free of leading
    ``special`` letters, so that x = sum_n P_n * special^{*n}.

    Defaults to the balanced product on B with special letter b_0.  Returns
    {n: P_n}.
    """
    inst = instance(inst)
    e = special or SPECIAL_LETTER[inst.id]
    x = as_lincomb(x)
    out: dict[int, dict] = {}
    for w, c in x.terms.items():
        for n, terms in _reg_T_inv_word(inst, e, tuple(w)):
            d = out.setdefault(n, {})
            for word, c2 in terms:
                d[word] = d.get(word, 0) + c * c2
    res = {n: LinComb((Word(w), c) for w, c in d.items()) for n, d in sorted(out.items())}
    return {n: p for n, p in res.items() if p}


def reg_T(poly: dict, inst=BALANCED_B, special: Letter | None = None) -> LinComb:
    """Inverse of ``reg_T_inverse``: sum_n P_n * e^{*n}."""
    from .quasishuffle import qshuffle, qshuffle_power
    inst = instance(inst)
    e = Word((special or SPECIAL_LETTER[inst.id],))
    out = LinComb()
    for n, p in poly.items():
        out = out + qshuffle(inst, p, qshuffle_power(inst, e, n))
    return out


def reg_by_elimination(x) -> LinComb:
    return reg_T_inverse(x).get(0, LinComb())


# --- reg: closed formula ----------------------------------------------------

def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for i in range(total + 1):
        for rest in _compositions(total - i, parts - 1):
            yield (i,) + rest


@lru_cache(maxsize=None)
def _reg_word(w: Word) -> LinComb:
    m0 = 0
    while m0 < len(w) and w[m0] == B0:
        m0 += 1
    if m0 == 0:
        return LinComb({w: 1})
    blocks = b_blocks(w[m0:]) if m0 < len(w) else []
    if not blocks:
        return LinComb()
    sign = -1 if m0 % 2 else 1
    out: dict = {}
    for ns in _compositions(m0, len(blocks)):
        coef = sign
        for (k, m), n in zip(blocks, ns):
            coef *= math.comb(m + n, n)
        word = from_b_blocks([(k, m + n) for (k, m), n in zip(blocks, ns)])
        out[word] = out.get(word, 0) + coef
    return LinComb(out)


def reg(x) -> LinComb:
    """Regularization to B^0: the T^0 part of reg_T_inverse, via the
    closed binomial formula."""
    return as_lincomb(x).map_linear(_reg_word)


def delta_dec0(w) -> LinComb:
    """(reg ⊗ reg) ∘ Δ_dec on B^0."""
    if isinstance(w, LinComb):
        for k in w.terms:
            _require_b0_free(k)
        return w.map_linear(delta_dec0)
    w = Word(w)
    _require_b0_free(w)
    return tensor_map(delta_dec(w), _reg_word)


# --- involutions and the embedding -----------------------------------------

def tau_B(x):
    """tau(b_{k1}b0^{m1}...b_{kd}b0^{md}) = b_{md+1}b0^{kd-1}...b_{m1+1}b0^{k1-1}."""
    if isinstance(x, LinComb):
        return x.map_keys(tau_B)
    w = Word(x)
    _require_b0_free(w)
    blocks = b_blocks(w)
    return from_b_blocks([(m + 1, k - 1) for k, m in reversed(blocks)])


_SWAP_PY = {"p": Letter(PY, ("y",)), "y": Letter(PY, ("p",))}


def tau_PY(x):
    """Reverse a {p, y}-word and exchange p and y."""
    if isinstance(x, LinComb):
        return x.map_keys(tau_PY)
    return Word(_SWAP_PY[l.idx[0]] for l in reversed(Word(x)))


def embed_i(x):
    """i(b_{s1}...b_{sl}) = p^{s1} y ... p^{sl} y."""
    if isinstance(x, LinComb):
        return x.map_keys(embed_i)
    p, yl = Letter(PY, ("p",)), Letter(PY, ("y",))
    letters: list[Letter] = []
    for l in Word(x):
        letters.extend([p] * l.idx[0])
        letters.append(yl)
    return Word(letters)


# --- phi_sharp and swap on words --------------------------------------------
# Both are computed per block of words sharing depth and the tuple of k's
# (phi_sharp) or depth and total degree (swap), by expanding the generating
# monomials under the relevant linear substitution.

def _expand_product(factors, nvars: int) -> dict:
    """Expand prod_i (L_i)^{e_i}; factors is a list of (linear form, e),
    a linear form being {var: coef}.  Returns {exponent tuple: coef}."""
    poly = {(0,) * nvars: Fraction(1)}
    for form, e in factors:
        for _ in range(e):
            new: dict = {}
            for mono, c in poly.items():
                for var, a in form.items():
                    m = list(mono)
                    m[var] += 1
                    m = tuple(m)
                    new[m] = new.get(m, 0) + c * a
            poly = {k: v for k, v in new.items() if v}
    return poly


def _m_vectors(total: int, d: int):
    return _compositions(total, d)


@lru_cache(maxsize=None)
def _phi_column(ms: tuple) -> dict:
    """phi_sharp(y_{k1,m1}...y_{kd,md}) restricted to the m-part:
    {m' : m! [Y^m] prod_i (Y1+..+Yi)^{m'_i}}."""
    d = len(ms)
    scale = math.prod(math.factorial(e) for e in ms)
    out = {}
    for mp in _m_vectors(sum(ms), d):
        factors = [({j: 1 for j in range(i + 1)}, mp[i]) for i in range(d)]
        c = _expand_product(factors, d).get(ms, 0)
        if c:
            out[mp] = Fraction(c * scale)
    return out


@lru_cache(maxsize=None)
def _phi_inv_column(ms: tuple) -> dict:
    """phi_sharp^{-1}(b_{k1}b0^{m1}...) on the m-part: {m' : coefficient}
    with coefficient [Y^{m}] prod (Y_i - Y_{i-1})^{m'_i} / m'_i!."""
    d = len(ms)
    total = sum(ms)
    out = {}
    for mp in _m_vectors(total, d):
        factors = [({i: 1, i - 1: -1} if i else {0: 1}, mp[i]) for i in range(d)]
        poly = _expand_product(factors, d)
        c = poly.get(ms, 0)
        if c:
            out[mp] = Fraction(c) / math.prod(math.factorial(e) for e in mp)
    return out


def _phi_word(w: Word) -> LinComb:
    ks = tuple(l.idx[0] for l in w)
    ms = tuple(l.idx[1] for l in w)
    return LinComb(
        (from_b_blocks(zip(ks, mp)), c) for mp, c in _phi_column(ms).items()
    )


def _phi_inv_word(w: Word) -> LinComb:
    _require_b0_free(w)
    blocks = b_blocks(w)
    ks = tuple(k for k, _ in blocks)
    ms = tuple(m for _, m in blocks)
    return LinComb(
        (Word(Letter(YBI, (k, m)) for k, m in zip(ks, mp)), c)
        for mp, c in _phi_inv_column(ms).items()
    )


def phi_sharp(x) -> LinComb:
    """The weight-graded isomorphism (Q<Ybi>, *) -> (Q<B>^0, *_b)."""
    return as_lincomb(x).map_linear(_phi_word)


def phi_sharp_inv(x) -> LinComb:
    return as_lincomb(x).map_linear(_phi_inv_word)


@lru_cache(maxsize=None)
def _swap_expansion(w: Word) -> dict:
    """rho(w) after X_i -> Y_1+..+Y_{d+1-i}, Y_i -> X_{d+1-i} - X_{d+2-i},
    as {w': coefficient of the normalized monomial of w'}."""
    d = len(w)
    ks = [l.idx[0] for l in w]
    ms = [l.idx[1] for l in w]
    xv = lambda i: 2 * i        # X_{i+1}
    yv = lambda i: 2 * i + 1    # Y_{i+1}
    factors = []
    for i in range(d):
        factors.append(({yv(j): 1 for j in range(d - i)}, ks[i] - 1))
        form = {xv(d - 1 - i): 1}
        if i > 0:
            form[xv(d - i)] = -1
        factors.append((form, ms[i]))
    poly = _expand_product(factors, 2 * d)
    scale = Fraction(1, math.prod(math.factorial(m) for m in ms))
    out = {}
    for mono, c in poly.items():
        kp = [mono[xv(i)] + 1 for i in range(d)]
        mp = [mono[yv(i)] for i in range(d)]
        coef = c * scale * math.prod(math.factorial(m) for m in mp)
        out[Word(Letter(YBI, (k, m)) for k, m in zip(kp, mp))] = coef
    return out


@lru_cache(maxsize=None)
def _ybi_block(d: int, g: int) -> tuple:
    """All Ybi-words of depth d with sum(k_i - 1) + sum(m_i) = g."""
    words = []
    for v in _compositions(g, 2 * d):
        words.append(Word(Letter(YBI, (v[2 * i] + 1, v[2 * i + 1])) for i in range(d)))
    return tuple(words)


@lru_cache(maxsize=None)
def _swap_word(v: Word) -> LinComb:
    # swap(v) = sum_w [normalized coefficient of v in swap(rho(w))] w
    d = len(v)
    if d == 0:
        return LinComb({v: 1})
    g = sum(l.idx[0] - 1 + l.idx[1] for l in v)
    out = {}
    for w in _ybi_block(d, g):
        c = _swap_expansion(w).get(v)
        if c:
            out[w] = c
    return LinComb(out)


def swap_Ybi(x) -> LinComb:
    """The swap involution on Ybi-words."""
    return as_lincomb(x).map_linear(_swap_word)
