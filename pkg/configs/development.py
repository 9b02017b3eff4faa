import os
basedir = os.path.abspath(os.path.dirname(__file__))

### DEVELOPMENT RUNS
# export WKGLAB_LOG_LEVEL=DEBUG for per-step output
GRID_N = 16
T_MAX = 40.0
SOLVER_T_END = 10.0
FIXED_POINT_MAX_ITER = 12
OUTPUT_DIR = os.path.join(basedir, '..', 'output', 'development')
