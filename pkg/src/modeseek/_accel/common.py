GAUSSIAN = 0
EPANECHNIKOV = 1
CUSTOM = -1

# At or above this many samples, sums use compensated accumulation.
COMPENSATED_MIN_N = 10_000

CONVERGED = 0
MAX_ITERATIONS = 1
DEGENERATE = 2
