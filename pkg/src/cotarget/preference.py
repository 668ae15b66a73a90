"""Pairwise-preference modeling over feature differences.

The choice model is a Bradley-Terry style logistic regression: the log-odds of
picking the first-presented agent equal a bias term plus a weighted sum of
feature differences (first minus second). Coefficients get independent
Gaussian(0, prior_sd^2) priors and are sampled with an adaptive random-walk
Metropolis sampler (multiple chains, ESS and split-chain R-hat checked).
Inclusion Bayes factors use the Savage-Dickey density ratio and are
approximations relative to a g-prior analysis.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betaln, expit
from scipy.stats import gaussian_kde, norm, rankdata

OBJECTIVE_FEATURES = [
    "human_score",
    "ai_score",
    "score_inequality",
    "ai_steals",
    "intersections",
]
SUBJECTIVE_FEATURES = [f"q{i}" for i in range(1, 9)]

FEATURE_SETS = {"objective": OBJECTIVE_FEATURES, "subjective": SUBJECTIVE_FEATURES}


class FitConvergenceError(RuntimeError):
    """Sampler failed the ESS / R-hat contract after all retries."""

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class ChoiceRecord:
    participant_id: str
    density: int
    agent_x: str
    agent_y: str
    features_x: dict[str, float]
    features_y: dict[str, float]
    chose_x: bool


@dataclass
class Design:
    """Difference design: column 0 is the intercept, the rest are scaled diffs."""

    X: np.ndarray
    y: np.ndarray
    feature_names: list[str]
    center: np.ndarray
    scale: np.ndarray

    def transform_diffs(self, diffs: np.ndarray) -> np.ndarray:
        scaled = (diffs - self.center) / self.scale
        ones = np.ones((scaled.shape[0], 1))
        return np.hstack([ones, scaled])


def record_diffs(record: ChoiceRecord, feature_names: list[str]) -> np.ndarray:
    try:
        return np.array(
            [record.features_x[f] - record.features_y[f] for f in feature_names]
        )
    except KeyError as e:
        raise ValueError(f"record missing feature {e.args[0]!r}") from e


def build_design(
    records: list[ChoiceRecord],
    feature_set: str = "objective",
    standardize: bool = True,
) -> Design:
    """Row per record: intercept plus (X_i - Y_i) difference columns.

    Standardization z-scores each difference column; zero-variance columns pass
    through unscaled with a warning.
    """
    if len(records) < 2:
        raise ValueError("need at least 2 records")
    names = FEATURE_SETS[feature_set]
    for r in records:
        if set(names) - set(r.features_x) or set(names) - set(r.features_y):
            raise ValueError("record feature names do not cover the feature set")
    diffs = np.array([record_diffs(r, names) for r in records], dtype=float)
    y = np.array([1 if r.chose_x else 0 for r in records], dtype=float)

    center = np.zeros(len(names))
    scale = np.ones(len(names))
    if standardize:
        center = diffs.mean(axis=0)
        sd = diffs.std(axis=0)
        flat = sd == 0
        if flat.any():
            warnings.warn(
                "zero-variance difference column(s) passed through unscaled: "
                + ", ".join(np.array(names)[flat])
            )
            # Constant columns keep their (zero after centering) values.
            center[flat] = 0.0
        scale = np.where(flat, 1.0, sd)
    scaled = (diffs - center) / scale
    X = np.hstack([np.ones((len(records), 1)), scaled])
    return Design(X=X, y=y, feature_names=list(names), center=center, scale=scale)


@dataclass(frozen=True)
class SamplerConfig:
    chains: int = 4
    warmup: int = 1500
    draws: int = 8000
    seed: int = 0
    min_ess: float = 1000.0
    max_rhat: float = 1.01
    max_attempts: int = 3


LIGHT_SAMPLER = SamplerConfig(chains=2, warmup=800, draws=2500, min_ess=100.0, max_rhat=1.05)


@dataclass(frozen=True)
class CoefficientSummary:
    name: str
    mean: float
    sd: float
    ci95_lower: float
    ci95_upper: float
    bf_inclusion: float
    ess: float
    rhat: float


@dataclass
class PosteriorSummary:
    coefficients: list[CoefficientSummary]
    design: Design = field(repr=False)
    prior_sd: float = 1.0
    samples: np.ndarray | None = field(default=None, repr=False)  # (chains, draws, d)

    @property
    def means(self) -> np.ndarray:
        return np.array([c.mean for c in self.coefficients])

    def coefficient(self, name: str) -> CoefficientSummary:
        for c in self.coefficients:
            if c.name == name:
                return c
        raise KeyError(name)


def _log_posterior(beta: np.ndarray, X: np.ndarray, y: np.ndarray, prior_sd: float) -> np.ndarray:
    """Vectorized over chains: beta is (chains, d)."""
    eta = X @ beta.T  # (n, chains)
    loglik = (y[:, None] * eta - np.logaddexp(0.0, eta)).sum(axis=0)
    logprior = -0.5 * (beta * beta).sum(axis=1) / (prior_sd * prior_sd)
    return loglik + logprior


def _autocovariance(x: np.ndarray) -> np.ndarray:
    """Biased autocovariance of a 1D series via FFT."""
    n = len(x)
    xc = x - x.mean()
    m = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(xc, m)
    acov = np.fft.irfft(f * np.conj(f), m)[:n].real / n
    return acov


def effective_sample_size(chains: np.ndarray) -> float:
    """Multi-chain ESS with Geyer's initial monotone positive sequence.

    ``chains`` has shape (m, n).
    """
    m, n = chains.shape
    acov = np.mean([_autocovariance(c) for c in chains], axis=0)
    chain_means = chains.mean(axis=1)
    within = acov[0] * n / (n - 1)
    var_plus = within * (n - 1) / n + (chain_means.var(ddof=1) if m > 1 else 0.0)
    if var_plus == 0:
        return float(m * n)
    rho = 1.0 - (within - acov) / var_plus
    # Sum consecutive pairs while they stay positive and non-increasing.
    tau = 1.0
    prev_pair = np.inf
    k = 1
    while k + 1 < n:
        pair = rho[k] + rho[k + 1]
        if pair < 0:
            break
        pair = min(pair, prev_pair)
        tau += 2.0 * pair
        prev_pair = pair
        k += 2
    return float(m * n / tau)


def split_rhat(chains: np.ndarray) -> float:
    """Split-chain potential scale reduction factor; chains is (m, n)."""
    m, n = chains.shape
    half = n // 2
    split = np.concatenate([chains[:, :half], chains[:, half : 2 * half]], axis=0)
    sm, sn = split.shape
    means = split.mean(axis=1)
    variances = split.var(axis=1, ddof=1)
    B = sn * means.var(ddof=1)
    W = variances.mean()
    if W == 0:
        return 1.0
    var_plus = (sn - 1) / sn * W + B / sn
    return float(math.sqrt(var_plus / W))


def _sample_chains(
    X: np.ndarray, y: np.ndarray, prior_sd: float, config: SamplerConfig, attempt: int
) -> np.ndarray:
    """Adaptive random-walk Metropolis; returns (chains, draws, d)."""
    d = X.shape[1]
    rng = np.random.default_rng([config.seed, attempt, 0x636F6566])
    m = config.chains
    beta = rng.normal(0.0, 0.1, size=(m, d))
    logp = _log_posterior(beta, X, y, prior_sd)

    log_step = np.full(m, math.log(0.1 / math.sqrt(d)))
    target_accept = 0.234

    def mh_step(proposal_chol: np.ndarray | None, adapt: bool, it: int):
        nonlocal beta, logp, log_step
        z = rng.standard_normal((m, d))
        if proposal_chol is None:
            step = np.exp(log_step)[:, None] * z
        else:
            step = np.exp(log_step)[:, None] * (z @ proposal_chol.T)
        prop = beta + step
        logp_prop = _log_posterior(prop, X, y, prior_sd)
        accept = np.log(rng.random(m)) < logp_prop - logp
        beta = np.where(accept[:, None], prop, beta)
        logp = np.where(accept, logp_prop, logp)
        if adapt:
            rate = accept.astype(float)
            log_step += (rate - target_accept) / max(1.0, (it + 1) ** 0.6)

    # Phase 1: scale-only adaptation from identity proposals.
    phase1 = config.warmup // 3
    for it in range(phase1):
        mh_step(None, True, it)

    # Phase 2: keep adapting scale, collect draws to estimate the posterior
    # covariance used as the proposal shape.
    collected = []
    for it in range(config.warmup - phase1):
        mh_step(None, True, phase1 + it)
        collected.append(beta.copy())
    pool = np.concatenate(collected, axis=0)
    cov = np.cov(pool.T) + 1e-8 * np.eye(d)
    chol = np.linalg.cholesky(cov)
    log_step = np.full(m, math.log(2.38 / math.sqrt(d)))

    # Phase 3: short re-tune of the scalar step with the shaped proposal.
    for it in range(200):
        mh_step(chol, True, it)

    # Phase 4: fixed-kernel sampling.
    out = np.empty((m, config.draws, d))
    for it in range(config.draws):
        mh_step(chol, False, it)
        out[:, it, :] = beta
    return out


def fit(
    design: Design,
    prior_sd: float = 1.0,
    config: SamplerConfig | None = None,
    keep_samples: bool = False,
) -> PosteriorSummary:
    """Posterior over (bias, slopes) for the difference-logistic choice model.

    Retries with doubled draw counts until the ESS / R-hat contract holds, then
    summarizes each coefficient with mean, sd, central 95% interval, and a
    Savage-Dickey inclusion Bayes factor (prior density at zero over a Gaussian
    kernel estimate of the posterior density at zero).
    """
    if config is None:
        config = SamplerConfig()
    X, y = design.X, design.y
    d = X.shape[1]
    names = ["bias"] + design.feature_names

    diagnostics: dict = {}
    samples = None
    for attempt in range(config.max_attempts):
        cfg = SamplerConfig(
            chains=config.chains,
            warmup=config.warmup,
            draws=config.draws * (2**attempt),
            seed=config.seed,
            min_ess=config.min_ess,
            max_rhat=config.max_rhat,
            max_attempts=config.max_attempts,
        )
        samples = _sample_chains(X, y, prior_sd, cfg, attempt)
        ess = np.array([effective_sample_size(samples[:, :, j]) for j in range(d)])
        rhat = np.array([split_rhat(samples[:, :, j]) for j in range(d)])
        diagnostics = {"ess": ess, "rhat": rhat, "draws": cfg.draws}
        if ess.min() >= config.min_ess and rhat.max() < config.max_rhat:
            break
    else:
        raise FitConvergenceError(
            f"sampler failed convergence contract after {config.max_attempts} attempts: "
            f"min ESS {diagnostics['ess'].min():.0f}, max R-hat {diagnostics['rhat'].max():.3f}",
            diagnostics,
        )

    pooled = samples.reshape(-1, d)
    if np.abs(pooled.mean(axis=0)).max() > 5 * prior_sd:
        warnings.warn(
            "very large coefficient posterior mean; data may be (near-)separable"
        )

    prior_density_at_zero = norm.pdf(0.0, scale=prior_sd)
    coefficients = []
    for j in range(d):
        draws = pooled[:, j]
        kde = gaussian_kde(draws)
        post_at_zero = float(kde(0.0)[0])
        # guard against underflowed densities far in the posterior tail
        if post_at_zero > prior_density_at_zero / 1e12:
            bf = prior_density_at_zero / post_at_zero
        else:
            bf = math.inf
        lo, hi = np.percentile(draws, [2.5, 97.5])
        coefficients.append(
            CoefficientSummary(
                name=names[j],
                mean=float(draws.mean()),
                sd=float(draws.std(ddof=1)),
                ci95_lower=float(lo),
                ci95_upper=float(hi),
                bf_inclusion=float(bf),
                ess=float(diagnostics["ess"][j]),
                rhat=float(diagnostics["rhat"][j]),
            )
        )
    return PosteriorSummary(
        coefficients=coefficients,
        design=design,
        prior_sd=prior_sd,
        samples=samples if keep_samples else None,
    )


def predict(summary: PosteriorSummary, record: ChoiceRecord) -> float:
    """Plug-in probability that the first-presented agent is chosen."""
    diffs = record_diffs(record, summary.design.feature_names).reshape(1, -1)
    Xrow = summary.design.transform_diffs(diffs)
    return float(expit(Xrow @ summary.means)[0])


def predict_proba(summary: PosteriorSummary, records: list[ChoiceRecord]) -> np.ndarray:
    diffs = np.array(
        [record_diffs(r, summary.design.feature_names) for r in records]
    )
    Xmat = summary.design.transform_diffs(diffs)
    return expit(Xmat @ summary.means)


def auc_score(y_true: np.ndarray, scores: np.ndarray) -> float:
    """Rank-statistic AUC (ties shared)."""
    y_true = np.asarray(y_true)
    scores = np.asarray(scores)
    n1 = int(y_true.sum())
    n0 = len(y_true) - n1
    if n1 == 0 or n0 == 0:
        raise ValueError("AUC undefined: single-class labels")
    ranks = rankdata(scores)
    return float((ranks[y_true == 1].sum() - n1 * (n1 + 1) / 2) / (n1 * n0))


def cross_validate(
    records: list[ChoiceRecord],
    feature_set: str = "objective",
    folds: int = 10,
    seed: int = 0,
    prior_sd: float = 1.0,
    sampler: SamplerConfig | None = None,
) -> dict:
    """Record-level k-fold CV; returns pooled held-out accuracy and AUC."""
    n = len(records)
    if folds > n:
        raise ValueError(f"folds ({folds}) exceed records ({n})")
    if sampler is None:
        sampler = LIGHT_SAMPLER
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    fold_indices = np.array_split(order, folds)

    y_all: list[int] = []
    p_all: list[float] = []
    correct = 0
    for k, test_idx in enumerate(fold_indices):
        test_set = set(test_idx.tolist())
        train = [records[i] for i in range(n) if i not in test_set]
        test = [records[i] for i in test_idx]
        design = build_design(train, feature_set, standardize=True)
        summary = fit(
            design,
            prior_sd=prior_sd,
            config=SamplerConfig(
                chains=sampler.chains,
                warmup=sampler.warmup,
                draws=sampler.draws,
                seed=sampler.seed + k,
                min_ess=sampler.min_ess,
                max_rhat=sampler.max_rhat,
                max_attempts=sampler.max_attempts,
            ),
        )
        probs = predict_proba(summary, test)
        labels = np.array([1 if r.chose_x else 0 for r in test])
        correct += int(((probs >= 0.5).astype(int) == labels).sum())
        y_all.extend(labels.tolist())
        p_all.extend(probs.tolist())

    return {
        "accuracy": correct / n,
        "auc": auc_score(np.array(y_all), np.array(p_all)),
        "folds": folds,
    }


def binomial_bf(successes: int, trials: int) -> float:
    """BF10 for a binomial proportion: uniform prior on theta vs point null 0.5.

    BF10 = B(k+1, n-k+1) / 0.5^n, computed in log space.
    """
    if not 0 <= successes <= trials:
        raise ValueError(f"need 0 <= k <= n, got k={successes}, n={trials}")
    if trials == 0:
        return 1.0
    return float(
        math.exp(betaln(successes + 1, trials - successes + 1) + trials * math.log(2.0))
    )


def synthesize_records(
    n: int,
    beta0: float,
    betas: dict[str, float],
    seed: int = 0,
    feature_scale: float = 1.0,
) -> list[ChoiceRecord]:
    """Generate choice records from the model itself (tests and demos).

    Per-agent feature values are drawn so the differences are
    N(0, 2*feature_scale^2) per feature; labels follow the logistic model with
    the given coefficients applied to the raw differences.
    """
    rng = np.random.default_rng(seed)
    names = list(betas)
    fx = rng.normal(0.0, feature_scale, size=(n, len(names)))
    fy = rng.normal(0.0, feature_scale, size=(n, len(names)))
    diffs = fx - fy
    eta = beta0 + diffs @ np.array([betas[f] for f in names])
    chose = rng.random(n) < expit(eta)
    records = []
    for i in range(n):
        records.append(
            ChoiceRecord(
                participant_id=f"synthetic_{i}",
                density=5,
                agent_x="omit",
                agent_y="ignorant",
                features_x={f: float(fx[i, j]) for j, f in enumerate(names)},
                features_y={f: float(fy[i, j]) for j, f in enumerate(names)},
                chose_x=bool(chose[i]),
            )
        )
    return records


# --- choices CSV wire format ------------------------------------------------

CHOICE_BASE_COLUMNS = ["participant_id", "density", "agent_x", "agent_y", "chose_x"]


def write_choice_csv(records: list[ChoiceRecord], feature_names: list[str], path) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(
            CHOICE_BASE_COLUMNS
            + [f"x_{n}" for n in feature_names]
            + [f"y_{n}" for n in feature_names]
        )
        for r in records:
            writer.writerow(
                [r.participant_id, r.density, r.agent_x, r.agent_y, int(r.chose_x)]
                + [r.features_x[n] for n in feature_names]
                + [r.features_y[n] for n in feature_names]
            )


def load_choice_csv(path) -> list[ChoiceRecord]:
    records = []
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        for row in reader:
            features_x = {}
            features_y = {}
            for col, val in row.items():
                if col.startswith("x_"):
                    features_x[col[2:]] = float(val)
                elif col.startswith("y_"):
                    features_y[col[2:]] = float(val)
            records.append(
                ChoiceRecord(
                    participant_id=row["participant_id"],
                    density=int(row["density"]),
                    agent_x=row["agent_x"],
                    agent_y=row["agent_y"],
                    features_x=features_x,
                    features_y=features_y,
                    chose_x=row["chose_x"] in ("1", "True", "true"),
                )
            )
    return records


def write_coefficient_csv(summary: PosteriorSummary, path) -> None:
    """Coefficient table with diagnostics; BFs are Savage-Dickey approximations."""
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(
            ["coefficient", "bf_inclusion", "mean", "sd", "ci_lower", "ci_upper", "ess", "rhat"]
        )
        for c in summary.coefficients:
            writer.writerow(
                [c.name, c.bf_inclusion, c.mean, c.sd, c.ci95_lower, c.ci95_upper, c.ess, c.rhat]
            )
