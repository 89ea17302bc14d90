"""Per-block scale allocation under an exact pixel budget.

Every block gets one of three integer downscale factors.  The middle factor
is the nominal rate; a "trade" promotes ``a`` blocks to the fine factor and
pays for them by demoting ``c`` blocks to the coarse factor, where (a, c) is
the unique minimal ratio that keeps the total number of stored low-resolution
pixels exactly equal to the uniform middle-factor baseline.

Trades are taken greedily: promote the blocks that gain the most, demote the
blocks that lose the least, and stop as soon as a trade's predicted net gain
drops below the configured dB threshold.  A brute-force sweep over all trade
counts (:func:`oracle_allocate`) exists to cross-check the greedy loop on
small inputs.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .image import BlockGrid
from .metrics import psnr
from .resample import Scaler, downscale, upscale

THREADS_ENV = "BBMR_THREADS"


@dataclass(frozen=True)
class FactorTriple:
    """Three increasing integer downscale factors; the middle one is the
    nominal overall rate."""

    k1: int
    k2: int
    k3: int

    def __post_init__(self):
        if not (1 <= self.k1 < self.k2 < self.k3):
            raise ValueError(
                f"factors must satisfy 1 <= k1 < k2 < k3, got "
                f"({self.k1}, {self.k2}, {self.k3})")

    def __iter__(self):
        return iter((self.k1, self.k2, self.k3))

    def for_code(self, code: int) -> int:
        """Map a scale code (1, 2 or 3) to its factor."""
        return (self.k1, self.k2, self.k3)[code - 1]


@dataclass(frozen=True)
class BudgetRatio:
    """Blocks promoted (a) and demoted (c) per trade, in lowest terms."""

    a: int
    c: int


def solve_budget_ratio(factors: FactorTriple, block_h: int, block_w: int) -> BudgetRatio:
    """Smallest positive (a, c) making one trade pixel-neutral.

    With p_s the stored pixel count of a block at factor k_s, the trade must
    satisfy a*p1 + c*p3 = (a + c)*p2 exactly, i.e. a : c = (p2 - p3) : (p1 - p2).
    """
    for k in factors:
        if block_h % k or block_w % k:
            raise ValueError(f"factor {k} does not divide block {block_h}x{block_w}")
    p1 = (block_h // factors.k1) * (block_w // factors.k1)
    p2 = (block_h // factors.k2) * (block_w // factors.k2)
    p3 = (block_h // factors.k3) * (block_w // factors.k3)
    a, c = p2 - p3, p1 - p2
    if a <= 0 or c <= 0:
        raise AssertionError("no positive trade ratio; factors are not increasing")
    g = math.gcd(a, c)
    a, c = a // g, c // g
    assert a * p1 + c * p3 == (a + c) * p2
    return BudgetRatio(a=a, c=c)


def evaluate_candidates(grid: BlockGrid, hr_blocks: list[np.ndarray],
                        factors: FactorTriple, scaler: Scaler,
                        down_scaler: Scaler | None = None) -> np.ndarray:
    """Score every block at every candidate factor.

    Each block is round-tripped (down then up) at each factor and compared
    to the original on luma PSNR.  Returns an (N, 3) float64 matrix whose
    columns correspond to k1, k2, k3; lossless round trips score the cap.

    ``scaler`` reconstructs; ``down_scaler`` (default: same) produces the
    low-resolution side.  Splitting them lets a cheap kernel stand in for
    the reconstruction while scoring the exact representation the encoder
    will store.

    Blocks are scored independently; set the ``BBMR_THREADS`` environment
    variable above 1 to fan the work out over a thread pool (results are
    gathered by index, so the matrix does not depend on the thread count).
    """
    if len(hr_blocks) != grid.n_blocks:
        raise ValueError(f"expected {grid.n_blocks} blocks, got {len(hr_blocks)}")
    down = down_scaler if down_scaler is not None else scaler

    def score_row(block: np.ndarray) -> list[float]:
        row = []
        for k in factors:
            restored = upscale(downscale(block, k, down), k, scaler)
            row.append(psnr(block, restored).value)
        return row

    n_threads = int(os.environ.get(THREADS_ENV, "1") or "1")
    if n_threads > 1 and grid.n_blocks > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            rows = list(pool.map(score_row, hr_blocks))
    else:
        rows = [score_row(b) for b in hr_blocks]
    return np.array(rows, dtype=np.float64)


@dataclass(frozen=True)
class TradeArrays:
    """Sorted promotion gains and demotion losses.

    ``earn[k] = (P_fine - P_mid, block)`` sorted by gain descending;
    ``pay[k] = (P_mid - P_coarse, block)`` sorted by loss ascending.
    Ties break on ascending block index, so the order is deterministic.
    """

    earn: list[tuple[float, int]]
    pay: list[tuple[float, int]]


def build_trade_arrays(scores: np.ndarray) -> TradeArrays:
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 2 or scores.shape[1] != 3:
        raise ValueError(f"scores must be (N, 3), got {scores.shape}")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    gains = scores[:, 0] - scores[:, 1]
    losses = scores[:, 1] - scores[:, 2]
    # stable argsort keeps ascending block index within equal values
    earn_idx = np.argsort(-gains, kind="stable")
    pay_idx = np.argsort(losses, kind="stable")
    earn = [(float(gains[i]), int(i)) for i in earn_idx]
    pay = [(float(losses[i]), int(i)) for i in pay_idx]
    return TradeArrays(earn=earn, pay=pay)


@dataclass(frozen=True, eq=False)
class ScalePlan:
    """Per-block scale codes (1 = fine, 2 = mid, 3 = coarse) plus the
    parameters that produced them."""

    codes: np.ndarray
    factors: FactorTriple
    ratio: BudgetRatio
    threshold_db: float
    trades: int

    def counts(self) -> tuple[int, int, int]:
        codes = np.asarray(self.codes)
        return (int(np.sum(codes == 1)), int(np.sum(codes == 2)),
                int(np.sum(codes == 3)))

    def lr_pixels(self, block_h: int, block_w: int) -> int:
        """Total stored pixels per channel under this plan."""
        total = 0
        for code in np.asarray(self.codes):
            k = self.factors.for_code(int(code))
            total += (block_h // k) * (block_w // k)
        return total


def uniform_plan(n_blocks: int, factors: FactorTriple, ratio: BudgetRatio,
                 threshold_db: float = 0.0) -> ScalePlan:
    """All blocks at the middle factor; the zero-trade baseline."""
    return ScalePlan(codes=np.full(n_blocks, 2, dtype=np.int8), factors=factors,
                     ratio=ratio, threshold_db=threshold_db, trades=0)


def default_block_max(n_blocks: int, ratio: BudgetRatio) -> int:
    """Most trades a grid can physically hold."""
    return n_blocks // (ratio.a + ratio.c)


def allocate(trade_arrays: TradeArrays, ratio: BudgetRatio, threshold_db: float,
             block_max_k1: int, n_blocks: int, factors: FactorTriple) -> ScalePlan:
    """Greedy trade loop.

    Each iteration tentatively takes the next ``a`` still-unassigned blocks
    in earn order and the next ``c`` in pay order (earn has priority when
    both want the same block in one iteration).  The trade commits only if
    the summed gain beats the summed loss by at least ``threshold_db``; the
    first failing iteration stops the loop for good.  Degenerate inputs fall
    through to the uniform plan.
    """
    codes = np.full(n_blocks, 2, dtype=np.int8)
    taken = np.zeros(n_blocks, dtype=bool)
    earn, pay = trade_arrays.earn, trade_arrays.pay
    earn_pos = pay_pos = 0
    trades = 0
    while trades < block_max_k1:
        picks_earn: list[tuple[float, int]] = []
        pos = earn_pos
        while pos < len(earn) and len(picks_earn) < ratio.a:
            val, idx = earn[pos]
            pos += 1
            if not taken[idx]:
                picks_earn.append((val, idx))
        if len(picks_earn) < ratio.a:
            break
        next_earn_pos = pos
        in_this_trade = {idx for _, idx in picks_earn}

        picks_pay: list[tuple[float, int]] = []
        pos = pay_pos
        while pos < len(pay) and len(picks_pay) < ratio.c:
            val, idx = pay[pos]
            pos += 1
            if not taken[idx] and idx not in in_this_trade:
                picks_pay.append((val, idx))
        if len(picks_pay) < ratio.c:
            break
        next_pay_pos = pos

        earn_sum = math.fsum(v for v, _ in picks_earn)
        pay_sum = math.fsum(v for v, _ in picks_pay)
        if not earn_sum >= pay_sum + threshold_db:
            break

        for _, idx in picks_earn:
            codes[idx] = 1
            taken[idx] = True
        for _, idx in picks_pay:
            codes[idx] = 3
            taken[idx] = True
        earn_pos, pay_pos = next_earn_pos, next_pay_pos
        trades += 1
    return ScalePlan(codes=codes, factors=factors, ratio=ratio,
                     threshold_db=threshold_db, trades=trades)


ORACLE_MAX_BLOCKS = 64


def oracle_allocate(scores: np.ndarray, ratio: BudgetRatio, threshold_db: float,
                    n_blocks: int, factors: FactorTriple,
                    block_max_k1: int | None = None) -> ScalePlan:
    """Exhaustive reference for :func:`allocate` on small inputs.

    Sweeps every trade count m in [0, floor(N / (a + c))], rebuilding the
    prefix selections from scratch for each m, and keeps the feasible plan
    with the highest predicted PSNR sum.  Feasibility means every one of the
    m trades individually clears the threshold; PSNR ties resolve toward
    more trades, mirroring the greedy's willingness to take zero-margin
    trades at threshold zero.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if n_blocks > ORACLE_MAX_BLOCKS:
        raise ValueError(f"oracle limited to {ORACLE_MAX_BLOCKS} blocks, got {n_blocks}")
    if scores.shape != (n_blocks, 3):
        raise ValueError(f"scores must be ({n_blocks}, 3), got {scores.shape}")

    # independent re-derivation of the sorted orders
    earn = sorted(((float(scores[i, 0] - scores[i, 1]), i) for i in range(n_blocks)),
                  key=lambda p: (-p[0], p[1]))
    pay = sorted(((float(scores[i, 1] - scores[i, 2]), i) for i in range(n_blocks)),
                 key=lambda p: (p[0], p[1]))

    hard_max = n_blocks // (ratio.a + ratio.c)
    if block_max_k1 is not None:
        hard_max = min(hard_max, block_max_k1)

    def simulate(m: int):
        """Replay m prefix trades; returns (codes, feasible, psnr_sum)."""
        codes = np.full(n_blocks, 2, dtype=np.int8)
        taken = set()
        e_pos = p_pos = 0
        for _ in range(m):
            sel_e = []
            while e_pos < n_blocks and len(sel_e) < ratio.a:
                val, idx = earn[e_pos]
                e_pos += 1
                if idx not in taken:
                    sel_e.append((val, idx))
            if len(sel_e) < ratio.a:
                return None, False, 0.0
            pending = {idx for _, idx in sel_e}
            sel_p = []
            while p_pos < n_blocks and len(sel_p) < ratio.c:
                val, idx = pay[p_pos]
                p_pos += 1
                if idx not in taken and idx not in pending:
                    sel_p.append((val, idx))
            if len(sel_p) < ratio.c:
                return None, False, 0.0
            if not math.fsum(v for v, _ in sel_e) >= \
                    math.fsum(v for v, _ in sel_p) + threshold_db:
                return None, False, 0.0
            for _, idx in sel_e:
                codes[idx] = 1
                taken.add(idx)
            for _, idx in sel_p:
                codes[idx] = 3
                taken.add(idx)
        total = math.fsum(scores[i, codes[i] - 1] for i in range(n_blocks))
        return codes, True, total

    best_codes, best_total, best_m = None, -math.inf, 0
    for m in range(hard_max + 1):
        codes, feasible, total = simulate(m)
        if feasible and total >= best_total:
            best_codes, best_total, best_m = codes, total, m
    assert best_codes is not None  # m = 0 is always feasible
    return ScalePlan(codes=best_codes, factors=factors, ratio=ratio,
                     threshold_db=threshold_db, trades=best_m)
