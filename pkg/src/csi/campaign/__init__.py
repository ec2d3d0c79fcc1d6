from .config import (
    SHIPPED_OBJECTIVES,
    CampaignConfig,
    ConfigError,
    ContractConfig,
    SamplerConfig,
    from_dict,
    load_config,
)
from .runner import (
    SCATTER_HEADER,
    CampaignReport,
    MonitorResult,
    RunRecord,
    decode_real,
    encode_real,
    evaluate_run,
    export_scatter,
    monitor_cmd,
    monitor_trace,
    nuisance_seed,
    read_results,
    run,
)

__all__ = [name for name in dir() if not name.startswith("_")]
