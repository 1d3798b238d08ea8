from .logging_config import (
    current_run_id,
    get_logger,
    log_function_call,
    log_manager,
    log_with_context,
    new_run_id,
    setup_logging,
)

__all__ = [
    "setup_logging",
    "get_logger",
    "log_manager",
    "log_with_context",
    "log_function_call",
    "new_run_id",
    "current_run_id",
]
