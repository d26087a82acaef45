__version__ = '0.3.0'

# Names of the parameter arrays in a checkpoint container, per layer.
PARAM_NAMES = ("U", "V", "W")

# Seed frames needed to start a rollout, keyed by model depth.
SEED_FRAMES = {1: 2, 2: 3}

# Predictions with a larger absolute value are treated as diverged.
DIVERGENCE_LIMIT = 1e6

DESCRIPTOR_KINDS = ["m1_first", "m1_second", "m1_concat", "m2"]

GENERATOR_KINDS = ["const-shift", "const-rot", "acc-shift", "acc-rot", "balls"]

THREADS_ENV = "RELSEQ_THREADS"
