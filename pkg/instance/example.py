import math

# Trees
DEFAULT_MAX_DEGREE = 4
NODE_CAP = 10**7

# Simulation
ROUND_CAP_FACTOR = 4
ROUND_CAP_SLACK = 16

# Rake and compress
DEFAULT_ELL = 4
RAKE_ROUNDS = 1
COMPRESS_ROUNDS = 1

# Exponent solver
ALPHA_TOLERANCE = 1e-12
ALPHA_MAX_ITERATIONS = 200
I0_GUARD = 1e-12

# Half-logarithm
HALFLOG_BASE = math.e
HALFLOG_T0 = 0.25
HALFLOG_T1 = 0.5
HALFLOG_X_MAX = 1e6
HALFLOG_TOLERANCE = 1e-6

# 2.5-coloring with an id promise: a closed path waits WAIT_FACTOR * |P| rounds
WAIT_FACTOR = 2

# Benchmarks
CSV_FLOAT_FORMAT = "%.12g"
DEFAULT_THREADS = 4
RECORD_WALL_TIME = False

LOG_LEVEL = "INFO"
