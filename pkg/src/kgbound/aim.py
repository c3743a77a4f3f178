"""Exact termination certificate for the iterative solution scheme.

The radial equation, after peeling off the asymptotic factor, is solved by
an iteration built from two seed functions

    lambda_0(z) = 2 (tau z - (eta + 1)) / z,
    s_0(z)      = (2 tau (eta + 1) - beta^2) / z,

with the recurrences

    lambda_n = lambda_{n-1}' + lambda_0 lambda_{n-1} + s_{n-1},
    s_n      = s_{n-1}'      + s_0      lambda_{n-1}.

The iteration terminates at level n exactly when

    delta_n(z) = s_n lambda_{n-1} - s_{n-1} lambda_n

vanishes identically, which happens iff tau = beta^2 / (2 (eta + n + 1)).
Everything here is exact rational-function arithmetic over Fraction, so
"vanishes identically" is a symbolic statement, not a numerical one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError


def _coeff(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise DomainError(f"exact arithmetic needs int or Fraction, got {type(value).__name__}")


class Poly:
    """Dense univariate polynomial with Fraction coefficients.

    coeffs[k] multiplies z**k; trailing zeros are stripped so the zero
    polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_coeff(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def one(cls) -> "Poly":
        return cls((Fraction(1),))

    @classmethod
    def x(cls) -> "Poly":
        return cls((Fraction(0), Fraction(1)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        if self.is_zero:
            raise DomainError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Poly(out)

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = _coeff(other)
            return Poly(tuple(c * f for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return Poly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def derivative(self) -> "Poly":
        return Poly(tuple(k * c for k, c in enumerate(self.coeffs) if k))

    def divmod(self, other: "Poly"):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        d = other.degree
        lead = other.lead
        quot = [Fraction(0)] * max(len(rem) - d, 0)
        for k in range(len(rem) - 1, d - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            q = c / lead
            quot[k - d] = q
            for j, b in enumerate(other.coeffs):
                rem[k - d + j] -= q * b
        return Poly(quot), Poly(rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        inv = 1 / self.lead
        return Poly(tuple(c * inv for c in self.coeffs))

    def scale_arg(self, c) -> "Poly":
        """p(z) -> p(c z)."""
        f = _coeff(c)
        return Poly(tuple(coef * f ** k for k, coef in enumerate(self.coeffs)))

    def evaluate(self, z) -> Fraction:
        zf = _coeff(z)
        acc = Fraction(0)
        for coef in reversed(self.coeffs):
            acc = acc * zf + coef
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        if self.is_zero:
            return "Poly(0)"
        terms = [f"{c}*z^{k}" for k, c in enumerate(self.coeffs) if c != 0]
        return "Poly(" + " + ".join(terms) + ")"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero:
        a, b = b, a % b
    if a.is_zero:
        return a
    return a.monic()


class RationalFn:
    """Reduced ratio of two Polys with a monic denominator, so equal
    rational functions have identical representations."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly = Poly.one()):
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            num, den = Poly.zero(), Poly.one()
        else:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead_inv = 1 / den.lead
            num = num * lead_inv
            den = den.monic()
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFn is immutable")

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __add__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    def __neg__(self) -> "RationalFn":
        return RationalFn(-self.num, self.den)

    def __sub__(self, other: "RationalFn") -> "RationalFn":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalFn(self.num * other, self.den)
        return RationalFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def derivative(self) -> "RationalFn":
        return RationalFn(self.num.derivative() * self.den
                          - self.num * self.den.derivative(),
                          self.den * self.den)

    def scale_arg(self, c) -> "RationalFn":
        return RationalFn(self.num.scale_arg(c), self.den.scale_arg(c))

    def evaluate(self, z) -> Fraction:
        db = self.den.evaluate(z)
        if db == 0:
            raise ZeroDivisionError(f"pole at z={z}")
        return self.num.evaluate(z) / db

    def __eq__(self, other) -> bool:
        return (isinstance(other, RationalFn)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFn({self.num!r} / {self.den!r})"


@dataclass(frozen=True)
class AimState:
    """Iteration state: level n together with the seed pair it grew from."""

    n: int
    lam0: RationalFn
    s0: RationalFn
    lam: RationalFn
    s: RationalFn


def seed(tau, eta, beta_sq) -> AimState:
    """Level-0 state for exact rational inputs."""
    tau = _coeff(tau)
    eta = _coeff(eta)
    beta_sq = _coeff(beta_sq)
    z = Poly.x()
    lam0 = RationalFn(Poly((-2 * (eta + 1), 2 * tau)), z)
    s0 = RationalFn(Poly((2 * tau * (eta + 1) - beta_sq,)), z)
    return AimState(n=0, lam0=lam0, s0=s0, lam=lam0, s=s0)


def iterate(state: AimState) -> AimState:
    """One step of the recurrence, n -> n + 1."""
    lam_next = state.lam.derivative() + state.lam0 * state.lam + state.s
    s_next = state.s.derivative() + state.s0 * state.lam
    return AimState(n=state.n + 1, lam0=state.lam0, s0=state.s0,
                    lam=lam_next, s=s_next)


def termination_delta(state: AimState, previous: AimState) -> RationalFn:
    """delta = s_n lambda_{n-1} - s_{n-1} lambda_n for consecutive states."""
    if state.n != previous.n + 1:
        raise DomainError(f"states must be consecutive, got n={state.n} "
                          f"after n={previous.n}")
    return state.s * previous.lam - previous.s * state.lam


def exact_tau(eta, beta_sq, n: int) -> Fraction:
    """The tau at which the level-n iteration terminates exactly."""
    if not (isinstance(n, int) and n >= 0):
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    return _coeff(beta_sq) / (2 * (_coeff(eta) + n + 1))


def terminates_at(n: int, tau, eta, beta_sq) -> bool:
    """Whether the iteration terminates identically at level n for this tau.

    Builds the seed, iterates to level n + 1, and checks that the
    termination delta between levels n + 1 and n is the zero function.
    """
    if not (isinstance(n, int) and n >= 0):
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    state = seed(tau, eta, beta_sq)
    states = [state]
    for _ in range(n + 1):
        state = iterate(state)
        states.append(state)
    return termination_delta(states[n + 1], states[n]).is_zero


def verify_level(n: int, eta, beta_sq) -> bool:
    """Certificate for one level: exact tau makes the delta vanish."""
    return terminates_at(n, exact_tau(eta, beta_sq, n), eta, beta_sq)
