import math
import os
basedir = os.path.abspath(os.path.dirname(__file__))

### GRID
GRID_N = 32
GRID_L = 16 * math.pi
# None uses every core
THREADS = None

### DATA
EPS = 0.01
DATA_PRESET = 'gaussian-kg'
DATA_WIDTH = 0.4
SEED = None

### FORWARD SOLVER
SOLVER_DT = 0.05
SOLVER_MAX_DT = 0.1
SOLVER_T_END = 50.0
SNAPSHOT_STRIDE = 100
DIAGNOSTIC_STRIDE = 20
DIAGNOSTIC_SOBOLEV_INDEX = 2
DEALIASING = True
COUPLING = 1.0
BLOWUP_THRESHOLD = 1e8

### RESONANT CACHE
T_MAX = 200.0
CACHE_PER_OCTAVE = 4
CACHE_MAX_STEP = 4.0
CACHE_EXTRA_TIMES = [10.0, 40.0]
SLOW_QUADRATURE_DT = 0.05
QUADRATURE_DT = 0.05
QUADRATURE_RULE = 'simpson'
DENSITY_DROP_RTOL = 1e-14

### FIXED POINT
FIXED_POINT_TOL = 1e-8
FIXED_POINT_MAX_ITER = 8
CONTRACTION_WARN_RATIO = 0.5

### NORMS
NORM_N0 = 40
NORM_N1 = 3
NORM_D = 10
NORM_DELTA = 1e-10
VECTOR_FIELD_ORDER = 1
VECTOR_FIELD_ORDER_CAP = 2

### VERIFY
VERIFY_SECTIONS = ['lp', 'phase', 'probe', 'oracle', 'linear', 'decay',
                   'stepper', 'asymptotics']
VERIFY_SEED = 0
VERIFY_LP_SEEDS = 3
VERIFY_PHASE_SAMPLES = 1000000
VERIFY_PHASE_BALLS = [1, 2, 4]
VERIFY_TAYLOR_CEILING = 10.0
VERIFY_ORACLE_SEEDS = 20
VERIFY_ORACLE_L = 2 * math.pi
VERIFY_LINEAR_WIDTH = 2.0
VERIFY_COMMUTATION_N = 48
VERIFY_COMMUTATION_L = 24 * math.pi
VERIFY_DECAY_N = 160
VERIFY_DECAY_L = 110.0
VERIFY_DECAY_T0 = 5.0
VERIFY_DECAY_T1 = 50.0
VERIFY_STEPPER_N = 16
VERIFY_STEPPER_L = 4 * math.pi
VERIFY_STEPPER_EPS = 0.5
VERIFY_D_CEILING = 1.0
VERIFY_LEADING_T = 2.0
VERIFY_REFINEMENT_T = 10.0
VERIFY_REFINEMENT_TOL = 1e-6
VERIFY_HORIZON_DOUBLING = True
VERIFY_HORIZON_T = 10.0
VERIFY_FB_T0 = 10.0
VERIFY_FB_T1 = 40.0
VERIFY_ENVELOPE_SEEDS = 3

### OUTPUT
OUTPUT_DIR = os.path.join(os.getcwd(), 'output')
