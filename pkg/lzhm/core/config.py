"""
Laboratory configuration
"""
from pathlib import Path
from pydantic_settings import BaseSettings, SettingsConfigDict

# Get project root directory (where run.py is located)
# This file is in lzhm/core/, so we go up 2 levels to get to project root
PROJECT_ROOT = Path(__file__).parent.parent.parent.resolve()
ENV_FILE_PATH = PROJECT_ROOT / ".env"


class Settings(BaseSettings):
    """Numeric caps, tolerances and defaults shared by the services and the CLI"""

    model_config = SettingsConfigDict(
        env_file=str(ENV_FILE_PATH),
        env_file_encoding="utf-8",
        env_prefix="LZHM_",
        case_sensitive=False,
        extra="ignore",
    )

    # Largest |alphabet|^L the block walk may materialize
    block_cap: int = 2 ** 24

    # Exact string-complexity search is exponential in n
    complexity_n_cap: int = 24

    # Row sums of M, pi0 and emission rows
    stochastic_tol: float = 1e-9

    # An edge (i, j) of the chain graph exists iff M[i][j] > edge_tol
    edge_tol: float = 0.0

    # Epoch statistics: K_ab(gamma) is tracked for every block when L <= kgamma_track_cap,
    # otherwise only for the kgamma_top_blocks most likely blocks
    kgamma_track_cap: int = 4
    kgamma_top_blocks: int = 64
    # Prefix expansions the best-first top-block search may spend before giving up
    kgamma_search_cap: int = 2 ** 17
    # Half-width of the K_ab band in binomial standard deviations (plus one count)
    kgamma_band_sigmas: float = 4.0

    # Block length used to estimate the entropy rate of genuinely hidden models
    rate_l_max: int = 12

    symbol_text_encoding: str = "utf-8"
    log_level: str = "INFO"
    default_seed: int = 0


settings = Settings()
