TRIAL_KEY = "trial"
STEP_KEY = "step"
DIM_KEY = "dim"
GEL_KEY = "gel"
STOPPED_BY_KEY = "stopped_by"
CAPPED_KEY = "capped"
DURATION_KEY = "dur_s"

STOPPED_TRIVIAL = "trivial-composite"
STOPPED_CAP = "cap"

SUSPEND_TASK = "suspend"
PROJFREE_TASK = "projfree"
RANDOM_TASK = "random"

EXAMPLE_MODULE_FILE = "c3xs3_cokernel.json"

AGGREGATE_KEY = "aggregate"
