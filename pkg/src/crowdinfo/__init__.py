"""Information-theoretic limits and simulation for crowdsourced labeling."""

from .infomath import (
    Pmf,
    ValidationError,
    binary_entropy,
    entropy,
    msc_capacity_pointwise,
    rate_distortion_hamming,
    symmetric_entropy,
)
from .workers import (
    MscChannel,
    ShcChannel,
    SkillPopulation,
    WorkerState,
    msc_sample,
    msc_transition,
    population_mean_skill,
    shc_draw_worker,
    shc_respond,
)
from .kic import (
    KicCode,
    KicQuery,
    encode_query,
    enumerate_valid_responses,
    spammer_error_prob,
    spammer_error_prob_bruteforce,
)
from .bounds import (
    BoundQuery,
    RateBound,
    figure2_table,
    kic_rate_threshold,
    rmin_shc,
    rmin_sl_cs,
    rmin_sl_uk,
)
from .simulation import (
    ShcModel,
    SimConfig,
    SimulationReport,
    assign_queries,
    generate_dataset,
    run_majority_vote_sim,
    run_oracle_decoder_sim,
    run_simulation,
    sweep,
)
from .pricing import PriceQuote, campaign_cost, price_threshold, price_threshold_exact

__version__ = "0.1.0"
