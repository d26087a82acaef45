from relseq.evaluation.compare import compare_objectives
from relseq.evaluation.descriptor import descriptor_matrix
from relseq.evaluation.descriptor import extract_descriptor
from relseq.evaluation.logreg import Classifier
from relseq.evaluation.logreg import accuracy
from relseq.evaluation.logreg import train_logreg
from relseq.evaluation.metrics import rollout_mse

__all__ = [
    "Classifier",
    "accuracy",
    "compare_objectives",
    "descriptor_matrix",
    "extract_descriptor",
    "rollout_mse",
    "train_logreg",
]
