import math
import os
basedir = os.path.abspath(os.path.dirname(__file__))

### SMALL GRID AND SHORT HORIZONS FOR PYTEST
GRID_N = 8
GRID_L = 4 * math.pi
THREADS = 1

EPS = 0.01
SEED = 0

SOLVER_DT = 0.05
SOLVER_T_END = 1.0
SNAPSHOT_STRIDE = 5
DIAGNOSTIC_STRIDE = 5

T_MAX = 4.0
CACHE_MAX_STEP = 1.0
CACHE_EXTRA_TIMES = []
SLOW_QUADRATURE_DT = 0.25
QUADRATURE_DT = 0.25

NORM_N1 = 1
VECTOR_FIELD_ORDER = 0

VERIFY_SECTIONS = ['lp', 'oracle', 'linear']
VERIFY_PHASE_SAMPLES = 20000
VERIFY_ORACLE_SEEDS = 2
VERIFY_LP_SEEDS = 2
VERIFY_HORIZON_DOUBLING = False

OUTPUT_DIR = '/tmp/wkglab-test-output'
