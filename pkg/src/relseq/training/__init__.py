from relseq.training.optimizer import sgd_momentum_step
from relseq.training.trainer import TrainConfig
from relseq.training.trainer import TrainReport
from relseq.training.trainer import mapping_pairs
from relseq.training.trainer import predictive_finetune
from relseq.training.trainer import pretrain_gae
from relseq.training.trainer import pretrain_hgae_layer2

__all__ = [
    "TrainConfig",
    "TrainReport",
    "mapping_pairs",
    "predictive_finetune",
    "pretrain_gae",
    "pretrain_hgae_layer2",
    "sgd_momentum_step",
]
