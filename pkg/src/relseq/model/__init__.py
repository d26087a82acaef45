from relseq.model.gae import GaeParams
from relseq.model.hgae import HgaeParams
from relseq.model.hgae import params_from_arrays

__all__ = ["GaeParams", "HgaeParams", "params_from_arrays"]
