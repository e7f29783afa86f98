from .constants import *


class Config:
    # Logging configuration
    LOG_LEVEL = LOG_LEVEL
    LOG_FORMAT = LOG_FORMAT

    # Experiment configuration
    MASTER_SEED = MASTER_SEED
    MAX_EVALUATIONS = MAX_EVALUATIONS
    LAMBDA_B = LAMBDA_B
    WORKERS = WORKERS
    DELTA = DEFAULT_DELTA

    # Output configuration
    OUTPUT_DIR = OUTPUT_DIR
    CSV_COLUMNS = CSV_COLUMNS
    TRIAL_COLUMNS = TRIAL_COLUMNS
