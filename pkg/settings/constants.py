import os
from dotenv import load_dotenv

load_dotenv()

# Logging Configuration
LOG_LEVEL = os.getenv('LEVELGA_LOG_LEVEL', 'WARNING')
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Experiment Defaults
MASTER_SEED = int(os.getenv('LEVELGA_MASTER_SEED', '20150601'))
MAX_EVALUATIONS = int(float(os.getenv('LEVELGA_MAX_EVALUATIONS', '1e8')))
LAMBDA_B = float(os.getenv('LEVELGA_LAMBDA_B', '3'))
WORKERS = int(os.getenv('LEVELGA_WORKERS', '1'))
OUTPUT_DIR = os.getenv('LEVELGA_OUTPUT_DIR', 'results')
DEFAULT_DELTA = 0.1

# Exact computation limits
EXACT_ENUMERATION_MAX_N = 12
EXACT_PAIR_MAX_N = 8
EXACT_COMPOSITION_MAX_LAMBDA = 12
MAX_COMPOSITIONS = 20000
BRUTE_FORCE_MAX_N = 20
PARTITION_ENUMERATION_MAX_N = 20

# Statistics Configuration
GAMMA_GRID_POINTS = 100
CONFIDENCE_LEVEL = 0.95
MONTE_CARLO_SAMPLES = 10000
POPULATION_SAMPLES = 2000

# Output schemas
CSV_COLUMNS = [
    'family', 'n', 'lambda', 'k_or_mu_or_eta', 'p_m', 'p_c', 'trials',
    'censored', 'mean_T', 'median_T', 'ci_lo', 'ci_hi'
]
TRIAL_COLUMNS = [
    'family', 'n', 'size_index', 'trial', 'T', 'censored', 'generations',
    'evaluations', 'error'
]
REPORT_SECTIONS = ['parameters', 'conditions', 'measurements', 'notes']
ALLOWED_FORMATS = {'csv', 'json'}

# Experiment file keys (KEY=VALUE, same syntax as .env) -> CLI option names
EXPERIMENT_FILE_KEYS = {
    'PROBLEM': 'problem',
    'SIZES': 'sizes',
    'TRIALS': 'trials',
    'SEED': 'seed',
    'SELECTION': 'selection',
    'K': 'k',
    'MU': 'mu',
    'ETA': 'eta',
    'PM': 'pm',
    'CHI': 'chi',
    'PC': 'pc',
    'LAMBDA': 'lam',
    'LAMBDA_B': 'lambda_b',
    'PARTITION': 'partition',
    'CAP': 'cap',
    'OUT': 'out',
    'FORMAT': 'fmt',
    'DELTA': 'delta',
    'R': 'r',
    'WORKERS': 'workers',
    'INSTANCE': 'instance',
}

# Problem families known to the harness
PROBLEM_FAMILIES = {'royalroad', 'vcp', 'onemax', 'leadingones', 'toy'}
PARTITION_KINDS = {'canonical', 'merged', 'general'}
SELECTION_KINDS = {'tournament', 'mulambda', 'exprank'}
