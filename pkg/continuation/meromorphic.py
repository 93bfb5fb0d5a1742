"""
Meromorphic Continuation
Binomial double-sum expansions of f_q, zeta_q and the q-polylogarithms
"""

import logging
import math
from typing import Any, Callable, List, Optional, Sequence

from mpmath import mp, mpc

from continuation.poles import pole_report, polylog_singularity
from models.data_models import EvalMethod, EvalResult, QParam, SeriesConfig, SVec, make_svec
from models.errors import DomainError, PoleError
from qcore.arithmetic import gen_binomial_table, precision_scope
from qseries.nested_sums import qzeta_direct

logger = logging.getLogger(__name__)

# extra margin (natural log) below log(tol) when sizing a level's r-range
_CUTOFF_SLACK = 5 * math.log(10)
_REFINE_ROUNDS = 2


# ==================== EXPANSION LEVELS ====================

class ExpansionLevel:
    """
    Level j of the expansion: binomial parameter, numerator u_j(r) = base_j^j q^{jr}
    and denominator D_j(n) evaluated at n = r_j + ... + r_d.
    """

    def __init__(
        self,
        index: int,
        binom: mpc,
        base_power: mpc,
        log_size: float,
        denominator: Callable[[int], mpc],
        finite_cap: Optional[int] = None
    ):
        self.index = index
        self.binom = binom
        self.base_power = base_power
        self.log_size = log_size
        self.denominator = denominator
        self.finite_cap = finite_cap


def _nonpositive_integer(x: mpc) -> Optional[int]:
    if x.imag == 0 and x.real <= 0 and x.real == mp.floor(x.real):
        return int(-x.real)
    return None


# ==================== ENGINE ====================

class ContinuationEngine:
    """
    Evaluates prefactor * G_d(0) with
        G_j(R) = sum_{r=0}^{L_j} C(s_j+r-1, r) u_j(r) / D_j(r+R) * G_{j-1}(R+r),  G_0 = 1.

    Inner levels are tabulated bottom-up over every reachable R, so one pass costs
    O(sum_j L_j * (L_{j+1} + ... + L_d)). The outermost level optionally uses the
    zeta form in which C(s_d+r-1, r)/(1 - q^{s_d+r-1}) is a removable ratio.
    """

    def __init__(
        self,
        levels: List[ExpansionLevel],
        prefactor: mpc,
        qp: QParam,
        cfg: SeriesConfig,
        zeta_last: bool = False,
        polylog: bool = False
    ):
        self.levels = levels
        self.prefactor = prefactor
        self.qp = qp
        self.cfg = cfg
        self.zeta_last = zeta_last
        self.polylog = polylog

    # -------------------- cutoffs --------------------

    def _cutoff(self, level: ExpansionLevel) -> int:
        cap = self.cfg.max_terms
        if level.finite_cap is not None:
            cap = min(cap, level.finite_cap)
        if level.base_power == 0:
            return 0
        target = math.log(self.cfg.tol) - _CUTOFF_SLACK
        size = float(abs(level.binom))
        step_log = level.index * float(self.qp.log_q)
        base_log = math.lgamma(size + 1)
        previous = None
        for r in range(cap + 1):
            log_term = (
                math.lgamma(size + r + 1) - math.lgamma(r + 1) - base_log
                + r * step_log + level.log_size
            )
            if previous is not None and log_term < previous and log_term < target:
                return r
            previous = log_term
        return cap

    def _refined(self, cutoffs: List[int], factor: float) -> List[int]:
        out = []
        for level, L in zip(self.levels, cutoffs):
            cap = self.cfg.max_terms if level.finite_cap is None else min(self.cfg.max_terms, level.finite_cap)
            out.append(min(cap, int(L * factor) + 2))
        return out

    # -------------------- summation --------------------

    def _pole(self, level: ExpansionLevel, r: int, R: int) -> PoleError:
        if self.polylog:
            witness = {"j": level.index, "m": r + R}
            message = f"z_{level.index} ... z_d = q^-{r + R}: argument lies on the polylog singular set"
        else:
            witness = {"j": level.index, "r": r, "R": R}
            message = f"denominator 1 - q^(T_{level.index} + {r + R}) vanishes within threshold"
        return PoleError(message, witness=witness)

    def _zeta_last_weights(self, level: ExpansionLevel, L: int) -> List[mpc]:
        """c(r) u(r) / D(r) for the outermost zeta level, with C/D written as e(r) phi(x)"""
        log_q = self.qp.log_q
        threshold = self.qp.threshold
        s = level.binom
        d = level.index
        den = level.denominator(0)
        if abs(den) < threshold:
            raise self._pole(level, 0, 0)
        weights = [level.base_power / den]
        e = mpc(1)
        for r in range(1, L + 1):
            if r > 1:
                e = e * (s + r - 2) / r
            if e == 0:
                weights.extend([mpc(0)] * (L + 1 - r))
                break
            x = s + r - 1
            if x == 0:
                phi = -1 / log_q
            else:
                den = -mp.expm1(x * log_q)
                if abs(den) < threshold and abs(x) >= threshold:
                    raise self._pole(level, r, 0)
                phi = x / den
            weights.append(e * phi * mp.exp(d * x * log_q))
        return weights

    def _sum(self, cutoffs: List[int]) -> mpc:
        threshold = self.qp.threshold
        d = len(self.levels)
        # reach[j] = largest R at which G_j is needed
        reach = [0] * d
        for j in range(d - 2, -1, -1):
            reach[j] = reach[j + 1] + cutoffs[j + 1]

        previous: List[mpc] = [mpc(1)] * (reach[0] + cutoffs[0] + 1)
        for j in range(d - 1):
            level = self.levels[j]
            L = cutoffs[j]
            coeffs = gen_binomial_table(level.binom, L + 1)
            step = mp.exp(level.index * self.qp.log_q)
            numer = [level.base_power]
            for _ in range(L):
                numer.append(numer[-1] * step)
            denoms = [level.denominator(n) for n in range(reach[j] + L + 1)]
            current: List[mpc] = []
            for R in range(reach[j] + 1):
                total = mpc(0)
                for r in range(L + 1):
                    c = coeffs[r]
                    if c == 0:
                        continue
                    den = denoms[R + r]
                    if abs(den) < threshold:
                        raise self._pole(level, r, R)
                    total += c * numer[r] / den * previous[R + r]
                current.append(total)
            previous = current

        last = self.levels[-1]
        L = cutoffs[-1]
        if self.zeta_last:
            weights = self._zeta_last_weights(last, L)
        else:
            coeffs = gen_binomial_table(last.binom, L + 1)
            step = mp.exp(last.index * self.qp.log_q)
            weights = []
            u = last.base_power
            for r in range(L + 1):
                if coeffs[r] != 0:
                    den = last.denominator(r)
                    if abs(den) < threshold:
                        raise self._pole(last, r, 0)
                    weights.append(coeffs[r] * u / den)
                else:
                    weights.append(mpc(0))
                u = u * step
        return self.prefactor * mp.fsum(w * previous[r] for r, w in enumerate(weights))

    def evaluate(self, method: EvalMethod = EvalMethod.CONTINUED) -> EvalResult:
        cutoffs = [self._cutoff(level) for level in self.levels]
        value = self._sum(cutoffs)
        refined = self._refined(cutoffs, 1.25)
        better = self._sum(refined)
        error = abs(better - value)
        rounds = 0
        while error > self.cfg.tol and rounds < _REFINE_ROUNDS and refined != cutoffs:
            cutoffs, value = refined, better
            refined = self._refined(cutoffs, 2.0)
            better = self._sum(refined)
            error = abs(better - value)
            rounds += 1
        logger.debug("continuation cutoffs %s, refinement difference %s", refined, mp.nstr(error, 5))
        truncated = any(L >= self.cfg.max_terms for L in refined)
        if truncated:
            logger.warning("continuation r-range hit max_terms=%d", self.cfg.max_terms)
        elif error > self.cfg.tol:
            logger.warning("continuation refinement difference %s above tol", mp.nstr(error, 5))
        return EvalResult(
            value=better,
            error_bound=error,
            terms_used=self.cfg.max_terms if truncated else sum(L + 1 for L in refined),
            truncated=truncated,
            method=method
        )


# ==================== BUILDERS ====================

def _exponent_levels(s: SVec, t: SVec, qp: QParam, zeta_last: bool) -> List[ExpansionLevel]:
    d = len(s)
    log_q = qp.log_q
    levels = []
    for j in range(d):
        index = j + 1
        tail = sum(t[j:], mpc(0))

        def denominator(n: int, tail: mpc = tail) -> mpc:
            return -mp.expm1((tail + n) * log_q)

        cap = _nonpositive_integer(s[j])
        if cap is not None and zeta_last and j == d - 1:
            cap += 1
        levels.append(ExpansionLevel(
            index=index,
            binom=s[j],
            base_power=mp.exp(index * t[j] * log_q),
            log_size=float(index * t[j].real * log_q),
            denominator=denominator,
            finite_cap=cap
        ))
    return levels


def _weight_prefactor(weight: mpc, qp: QParam) -> mpc:
    return mp.exp(weight * mp.log(1 - qp.q))


def fq_continued(s: Sequence[Any], t: Sequence[Any], qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """f_q(s; t) at any point off its poles, through the binomial double sum"""
    with precision_scope(qp):
        s = make_svec(s)
        t = make_svec(t)
        if len(s) != len(t):
            raise DomainError(f"depth mismatch: s has {len(s)} entries, t has {len(t)}")
        engine = ContinuationEngine(
            _exponent_levels(s, t, qp, zeta_last=False), _weight_prefactor(sum(s, mpc(0)), qp), qp, cfg
        )
        return engine.evaluate()


def qzeta_continued(s: Sequence[Any], qp: QParam, cfg: SeriesConfig) -> EvalResult:
    """zeta_q(s) through the double sum, without the pole-set pre-check"""
    with precision_scope(qp):
        s = make_svec(s)
        t = tuple(x - 1 for x in s)
        engine = ContinuationEngine(
            _exponent_levels(s, t, qp, zeta_last=True),
            _weight_prefactor(sum(s, mpc(0)), qp),
            qp,
            cfg,
            zeta_last=True
        )
        return engine.evaluate()


def _direct_is_cheap(s: SVec, qp: QParam, cfg: SeriesConfig) -> bool:
    d = len(s)
    tails = [sum(s[j:], mpc(0)).real - (d - j) for j in range(d)]
    tau = min(tails)
    if tau <= 0:
        return False
    estimate = math.log(cfg.tol) / (float(tau) * float(qp.log_q)) + d
    return estimate <= cfg.max_terms // 2


def qzeta_eval(
    s: Sequence[Any],
    qp: QParam,
    cfg: SeriesConfig,
    method: EvalMethod = EvalMethod.AUTO
) -> EvalResult:
    """
    zeta_q(s) anywhere off the pole set.

    AUTO sums the nested series directly when it converges fast enough and otherwise
    evaluates the continuation double sum.

    Raises:
        PoleError: s lies on the pole set (the error carries the PoleReport)
    """
    with precision_scope(qp):
        vec = make_svec(s)
        report = pole_report(vec, qp)
        if report.in_pole_set:
            m, n = report.witness
            raise PoleError(
                f"zeta_q({', '.join(mp.nstr(x, 10) for x in vec)}) is on the pole set: "
                f"{report.matched_condition.value} at j={report.index}, witness ({m}, {n})",
                report=report,
                witness={"j": report.index, "m": m, "n": n}
            )
        if method == EvalMethod.DIRECT:
            return qzeta_direct(vec, qp, cfg)
        if method == EvalMethod.AUTO and _direct_is_cheap(vec, qp, cfg):
            return qzeta_direct(vec, qp, cfg)
        if method not in (EvalMethod.AUTO, EvalMethod.CONTINUED):
            raise DomainError(f"qzeta_eval does not support method {method.value}")
        return qzeta_continued(vec, qp, cfg)


def qpolylog_continued(
    n: Sequence[int], z: Sequence[Any], qp: QParam, cfg: SeriesConfig
) -> EvalResult:
    """Li_{q;n}(z) continued off the singular set z_j ... z_d in q^{-Z_{>=0}}"""
    with precision_scope(qp):
        z = make_svec(z)
        n = [int(x) for x in n]
        if len(n) != len(z):
            raise DomainError(f"depth mismatch: {len(n)} weights, {len(z)} arguments")
        if any(x < 1 for x in n):
            raise DomainError(f"polylog weights must be positive integers, got {n}")
        witness = polylog_singularity(z, qp)
        if witness is not None:
            raise PoleError(
                f"z_{witness['j']} ... z_d = q^-{witness['m']}: argument lies on the polylog singular set",
                witness=witness
            )
        log_q = qp.log_q
        levels = []
        tail = mpc(1)
        tails: List[mpc] = []
        for zj in reversed(z):
            tail = tail * zj
            tails.append(tail)
        tails.reverse()
        for j, (nj, zj) in enumerate(zip(n, z)):
            index = j + 1

            def denominator(m: int, tail: mpc = tails[j]) -> mpc:
                return 1 - tail * mp.exp(m * log_q)

            levels.append(ExpansionLevel(
                index=index,
                binom=mpc(nj),
                base_power=zj ** index,
                log_size=float(index * mp.log(abs(zj))) if zj != 0 else -math.inf,
                denominator=denominator
            ))
        engine = ContinuationEngine(levels, _weight_prefactor(mpc(sum(n)), qp), qp, cfg, polylog=True)
        return engine.evaluate()
