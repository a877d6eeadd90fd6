"""Open-system qubit dynamics under off-resonant scattering.

Lindblad integration (numerical reference) plus closed-form single-qubit
solutions and exact two-qubit gate fidelities for the LS (sz sz) and MS
(sx sx) interactions. Units: hbar = 1, rates and J in rad/s (or any common unit).

Basis ordering: |up> = (1, 0), |down> = (0, 1); sz|up> = +|up>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
SP = np.array([[0, 1], [0, 0]], dtype=complex)  # |up><down|
SM = SP.conj().T
UP = np.array([1, 0], dtype=complex)
DOWN = np.array([0, 1], dtype=complex)


class StateError(ValueError):
    pass


class IntegrationError(RuntimeError):
    pass


def kron(*ops):
    out = np.array([[1.0 + 0j]])
    for o in ops:
        out = np.kron(out, o)
    return out


def on_qubit(op, k, n):
    return kron(*[op if i == k else I2 for i in range(n)])


@dataclass(frozen=True)
class DecoherenceChannel:
    gamma_ud: float = 0.0
    gamma_du: float = 0.0
    gamma_el: float = 0.0
    mean_field: float = 0.0

    def __post_init__(self):
        if min(self.gamma_ud, self.gamma_du, self.gamma_el) < 0:
            raise ValueError("rates must be nonnegative")

    @property
    def gamma_r(self):
        return self.gamma_ud + self.gamma_du

    def jump_operators(self, k=0, n=1):
        ops = []
        for rate, op in ((self.gamma_ud, SM), (self.gamma_du, SP), (self.gamma_el / 4, SZ)):
            if rate > 0:
                ops.append(math.sqrt(rate) * on_qubit(op, k, n))
        return ops


def channel_jumps(channel, n):
    """Identical, independent scattering on each of n qubits."""
    ops = []
    for k in range(n):
        ops += channel.jump_operators(k, n)
    return ops


# ---------------------------------------------------------------- integrators


def validate_density(rho, tol=1e-10):
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise StateError("density operator must be square")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise StateError("density operator must be Hermitian")
    if abs(np.trace(rho) - 1) > tol:
        raise StateError("density operator must have unit trace")
    if np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))) < -tol:
        raise StateError("density operator must be positive semidefinite")
    return rho


def liouvillian_rhs(H, jumps):
    H = np.asarray(H, dtype=complex)
    Ls = [np.asarray(L, dtype=complex) for L in jumps]
    K = H - 0.5j * sum((L.conj().T @ L for L in Ls), np.zeros_like(H))
    Kd = K.conj().T

    def rhs(rho):
        out = -1j * (K @ rho - rho @ Kd)
        for L in Ls:
            out += L @ rho @ L.conj().T
        return out

    return rhs


def lindblad_integrate(H, jumps, rho0, times, rtol=1e-10, atol=1e-12):
    """Adaptive (DOP853) integration of the Lindblad equation; returns rho(t) for each t."""
    rho0 = validate_density(rho0)
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be sorted ascending")
    d = rho0.shape[0]
    rhs = liouvillian_rhs(H, jumps)

    def f(t, y):
        return rhs(y.view(complex).reshape(d, d)).reshape(-1).view(float)

    y0 = rho0.reshape(-1).copy().view(float)
    t0 = min(0.0, times[0]) if len(times) else 0.0
    if len(times) == 0:
        return np.zeros((0, d, d), dtype=complex)
    t_end = times[-1]
    if t_end == t0:
        return np.repeat(rho0[None], len(times), axis=0)
    sol = solve_ivp(f, (t0, t_end), y0, method="DOP853", t_eval=times, rtol=rtol, atol=atol)
    if not sol.success:
        raise IntegrationError(sol.message)
    out = sol.y.T.copy().view(complex).reshape(len(times), d, d)
    tr = np.abs(np.einsum("kii->k", out) - 1)
    if np.max(tr) > 1e-9:
        raise IntegrationError(f"trace drift {np.max(tr):.2e} exceeds 1e-9")
    return out


def rk4_integrate(H, jumps, rho0, times, dt):
    """Fixed-step classical Runge-Kutta; independent check on the adaptive solver."""
    rho = validate_density(rho0).copy()
    rhs = liouvillian_rhs(H, jumps)
    out = []
    t = 0.0
    for target in times:
        n = max(int(math.ceil((target - t) / dt)), 0)
        h = (target - t) / n if n else 0.0
        for _ in range(n):
            k1 = rhs(rho)
            k2 = rhs(rho + 0.5 * h * k1)
            k3 = rhs(rho + 0.5 * h * k2)
            k4 = rhs(rho + h * k3)
            rho = rho + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = target
        out.append(rho.copy())
    return np.array(out)


# ---------------------------------------------------------------- single qubit


def single_qubit_ls(channel, t):
    """rho_ud(t)/rho_ud(0) under H = Bbar sz with scattering."""
    return np.exp(-2j * channel.mean_field * t) * np.exp(-0.5 * (channel.gamma_r + channel.gamma_el) * t)


def single_qubit_ms_decay_rate(channel):
    """Decay rate of the precessing components under H = Bbar sx."""
    return 0.25 * (channel.gamma_el + 3 * channel.gamma_r)


def single_qubit_ms_frequency(channel):
    """r = sqrt(64 Bbar^2 - (gamma_el - gamma_r)^2); the precession frequency is r/4."""
    return np.lib.scimath.sqrt(64 * channel.mean_field**2 - (channel.gamma_el - channel.gamma_r) ** 2)


# ---------------------------------------------------------------- two-qubit gates


def ls_hamiltonian(J):
    return 0.5 * J * kron(SZ, SZ)


def ms_hamiltonian(J):
    return 0.5 * J * kron(SX, SX)


def ls_initial_state():
    plus = (DOWN + UP) / math.sqrt(2)
    psi = np.kron(plus, plus)
    return np.outer(psi, psi.conj())


def ms_initial_state():
    psi = np.kron(DOWN, DOWN)
    return np.outer(psi, psi.conj())


def ideal_state(gate, J, t):
    """Ideal pure-state density operator at time t."""
    H = ls_hamiltonian(J) if gate == "LS" else ms_hamiltonian(J)
    rho0 = ls_initial_state() if gate == "LS" else ms_initial_state()
    w, V = np.linalg.eigh(H)
    U = V @ np.diag(np.exp(-1j * w * t)) @ V.conj().T
    return U @ rho0 @ U.conj().T


def lindblad_fidelity(gate, params, times, rtol=1e-10, atol=1e-12):
    """Overlap Tr[rho_ideal(t) rho(t)] from direct integration of the master equation."""
    ch = DecoherenceChannel(params.gamma_ud, params.gamma_du, params.gamma_el)
    H = ls_hamiltonian(params.j) if gate == "LS" else ms_hamiltonian(params.j)
    rho0 = ls_initial_state() if gate == "LS" else ms_initial_state()
    traj = lindblad_integrate(H, channel_jumps(ch, 2), rho0, times, rtol, atol)
    return np.array([np.real(np.trace(ideal_state(gate, params.j, t) @ r)) for t, r in zip(times, traj)])


@dataclass(frozen=True)
class FidelityParams:
    j: float
    gamma_ud: float = 0.0
    gamma_du: float = 0.0
    gamma_el: float = 0.0

    @classmethod
    def from_rates(cls, j, rates):
        return cls(j, rates.gamma_ud, rates.gamma_du, rates.gamma_el)

    @property
    def gamma_plus(self):
        return 0.5 * (self.gamma_ud + self.gamma_du)

    @property
    def gamma_minus(self):
        return 0.5 * (self.gamma_ud - self.gamma_du)

    @property
    def gamma_cap(self):
        return self.gamma_plus + self.gamma_el / 2

    @property
    def j_tilde(self):
        return np.sqrt(complex(self.j**2 - self.gamma_plus**2, 2 * self.j * self.gamma_minus))

    @property
    def phi(self):
        return float(np.angle(self.j_tilde))

    @property
    def j_prime(self):
        return np.lib.scimath.sqrt(self.j**2 - (self.gamma_el / 2) ** 2)


def _sinc(z):
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < 1e-8
    safe = np.where(small, 1.0, z)
    return np.where(small, 1 - z**2 / 6, np.sin(safe) / safe)


def fidelity_ls_compact(p, t):
    """LS fidelity in the sinc form (before regrouping by decay envelope)."""
    t = np.asarray(t, dtype=float)
    J, G, Gp, Gm = p.j, p.gamma_cap, p.gamma_plus, p.gamma_minus
    jt = p.j_tilde
    env = np.exp(-(G + Gp) * t)
    sc = _sinc(jt * t)
    term = np.cos(J * t) * np.real(np.cos(jt * t) + Gp * t * sc) + 2 * np.sin(J * t) * np.imag((0.5j * J - Gm) * t * sc)
    return 0.25 * (1 + np.exp(-2 * G * t)) + 0.5 * env * term


def fidelity_ls_exact(p, t):
    """Exact LS (sz sz) gate fidelity from |++>, grouped by decay envelope."""
    t = np.asarray(t, dtype=float)
    J, G, Gp, Gm = p.j, p.gamma_cap, p.gamma_plus, p.gamma_minus
    if Gm == 0:
        return _fidelity_ls_balanced(p, t)
    jt = p.j_tilde
    mag, ph = abs(jt), p.phi
    jp = mag * math.cos(ph) + J
    jm = mag * math.cos(ph) - J
    gp, gm = Gp + 2 * Gm, Gp - 2 * Gm
    a_p = gp * math.sin(ph) + J * math.cos(ph)
    a_m = gm * math.sin(ph) - J * math.cos(ph)
    b_p = gp * math.cos(ph) - J * math.sin(ph)
    b_m = gm * math.cos(ph) + J * math.sin(ph)
    s = mag * math.sin(ph)
    e1 = np.exp(-(G + Gp + s) * t) / (8 * mag)
    e2 = np.exp(-(G + Gp - s) * t) / (8 * mag)
    f = e1 * ((mag - a_p) * np.cos(jp * t) + (mag - a_m) * np.cos(jm * t) + b_p * np.sin(jp * t) + b_m * np.sin(jm * t))
    f += e2 * ((mag + a_m) * np.cos(jp * t) + (mag + a_p) * np.cos(jm * t) + b_m * np.sin(jp * t) + b_p * np.sin(jm * t))
    return f + 0.25 * (1 + np.exp(-2 * G * t))


def _fidelity_ls_balanced(p, t):
    J, G, Gp = p.j, p.gamma_cap, p.gamma_plus
    jt = np.lib.scimath.sqrt(J**2 - Gp**2)
    # [jm cos(jp t) + jp cos(jm t) + Gp (sin(jp t) + sin(jm t))] / jt with jp, jm = jt +- J,
    # regrouped so the limit jt -> 0 stays finite
    osc = 2 * np.cos(jt * t) * np.cos(J * t) + 2 * t * _sinc(jt * t) * (J * np.sin(J * t) + Gp * np.cos(J * t))
    return np.real(0.25 * (1 + np.exp(-2 * G * t) + np.exp(-(G + Gp) * t) * osc))


def fidelity_ms_exact(p, t):
    """Exact MS (sx sx) gate fidelity from |down down>."""
    t = np.asarray(t, dtype=float)
    J, G, Gp, Gm, Gel = p.j, p.gamma_cap, p.gamma_plus, p.gamma_minus, p.gamma_el
    Gdu = p.gamma_du
    jpr = p.j_prime
    if Gm == 0:
        jm = J - jpr
        f = 0.25 * (1 + np.exp(-4 * Gp * t))
        f = f + np.exp(-(G + Gp) * t) / 4 * (
            2 * np.cos(jm * t) + t * _sinc(jpr * t) * (2 * jm * np.sin(J * t) + Gel * np.cos(J * t))
        )
        return np.real(f)
    jp_, jm_ = J + jpr, J - jpr
    eta_p = J**2 / 2 + 2 * Gp**2 + Gp * Gel
    eta_m = J**2 / 2 + 2 * Gp**2 - Gp * Gel
    lam_p = 2 * Gp + Gel
    lam_m = 2 * Gp - Gel
    A_p = (jm_ * (2 * eta_p - 2 * Gm * Gp - Gm * lam_p) + Gm * Gel * jpr) / (eta_p * jpr)
    A_m = (jp_ * (2 * eta_p - 2 * Gm * Gp - Gm * lam_p) - Gm * Gel * jpr) / (eta_p * jpr)
    B_p = (-2 * Gm * J * jm_ - Gel * eta_p + Gel * Gm * lam_p) / (eta_p * jpr)
    B_m = (-2 * Gm * J * jp_ - Gel * eta_p + Gel * Gm * lam_p) / (eta_p * jpr)
    C = jpr / (eta_p * eta_m) * (2 * Gdu * (Gel**2 - 4 * Gp**2 - J**2) + J**2 * Gel)
    D = (2 * Gdu * Gel * (Gel**2 - 4 * Gp**2 - 3 * J**2) + J**2 * (Gel**2 - 8 * Gp**2 - 2 * J**2)) / (2 * eta_p * eta_m)
    env = np.exp(-(G + Gp) * t)
    f = 0.25 * (1 + Gm**2 * lam_p / (Gp * eta_p))
    f = f + 0.25 * np.exp(-4 * Gp * t) * (1 - Gm * (2 * Gp - Gm) * lam_m / (Gp * eta_m))
    f = f + Gm / (2 * eta_p) * (lam_p * np.cos(J * t) + J * np.sin(J * t))
    f = f - env / 8 * (A_p * np.cos(jp_ * t) - A_m * np.cos(jm_ * t) + B_p * np.sin(jp_ * t) - B_m * np.sin(jm_ * t))
    f = f - Gm * env / (4 * jpr) * (C * np.cos(jpr * t) + D * np.sin(jpr * t))
    return np.real(f)


def fidelity_bell_approx(rates, tau_g, gate):
    """First-order Bell-time fidelity; rates needs gamma_r, gamma_el, gamma_plus, gamma_minus."""
    if gate == "LS":
        return 1 - (0.75 * rates.gamma_r + 0.5 * rates.gamma_el) * tau_g
    return 1 - tau_g * (2 * rates.gamma_plus + rates.gamma_el / 4 - (4 / math.pi) * rates.gamma_minus)


def fidelity_linear_rate(p, gate):
    """Initial linear decay rate -dF/dt at t=0+."""
    if gate == "LS":
        return p.gamma_plus + p.gamma_el / 2
    return 2 * p.gamma_du
