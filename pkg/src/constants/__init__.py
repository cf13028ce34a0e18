# Pipeline / artifact constants
PIPELINE_NAME: str = "LowCon"
ARTIFACT_DIR: str = "artifacts"
RESULTS_FOLDER: str = "results"
OUTPUT_DIR_ENV: str = "LOWCON_OUTPUT_DIR"

SIMULATION_RESULTS_FILE: str = "simulation_results.csv"
TOY_RESULTS_FILE: str = "toy_results.csv"
SWEEP_RESULTS_FILE: str = "theta_sweep_results.csv"
EMSE_RESULTS_FILE: str = "emse_results.csv"
DIAGNOSE_RESULTS_FILE: str = "diagnose_results.csv"

# CLI exit codes
EXIT_OK: int = 0
EXIT_CONFIG_ERROR: int = 2
EXIT_DATA_ERROR: int = 3
EXIT_NUMERICAL_ERROR: int = 4
EXIT_UNEXPECTED: int = 1

# Linear algebra
RANK_TOLERANCE: float = 1e-12

# Design generation
KAPPA_TARGET: float = 1.13
MAX_RESTARTS: int = 20
SWAP_BUDGET_FACTOR: int = 200

# Subsampling
METHODS: tuple = ("UNIF", "BLEV", "SLEV", "LEVUNW", "IBOSS", "LOWCON")
THETA: float = 1.0
SLEV_ALPHA: float = 0.9

# Huber M-estimator
HUBER_TUNING: float = 1.345
HUBER_MAX_ITER: int = 100
HUBER_TOL: float = 1e-8

# Simulation study defaults
DISTRIBUTIONS: tuple = ("D1", "D2", "D3")
MISSPECIFICATIONS: tuple = ("H1", "H2", "H3", "H4", "H5")
SIM_N: int = 10_000
SIM_P: int = 10
SIM_SIGMA2: float = 1.0
SIM_REPLICATES: int = 100
SIM_SEED: int = 2020
COV_SCALE: float = 10.0
COV_DECAY: float = 0.6
T_DF: float = 10.0
BETA_LARGE: float = 1.0
BETA_SMALL: float = 0.1
MISSPEC_MAX_ABS: float = 10.0
MAX_RETRIES: int = 5

# Toy example (x ~ Cauchy(0, TOY_SCALE) truncated to [-TOY_TRUNCATION, TOY_TRUNCATION])
TOY_N: int = 1000
TOY_SCALE: float = 0.03
TOY_TRUNCATION: float = 5.0
TOY_THETA: float = 0.0
TOY_METHODS: tuple = ("UNIF", "BLEV", "LOWCON")

# Theta sensitivity sweep
THETA_LIST: tuple = (0.0, 1.0, 5.0, 10.0)

# Diagnose defaults
DIAGNOSE_ALPHA: float = 1.0

