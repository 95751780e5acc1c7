"""Line and section classifiers: linear SVM, CART decision tree,
multinomial naive Bayes and a character-level recurrent network."""

from .balance import balance_dataset
from .bayes import NaiveBayesModel, train_naive_bayes
from .rnn import (
    RnnConfig,
    RnnModel,
    one_hot_encode,
    rnn_forward,
    train_rnn,
)
from .svm import LinearSvmModel, train_linear_svm
from .tree import DecisionTreeModel, gini_index, train_decision_tree

__all__ = [
    "balance_dataset",
    "NaiveBayesModel", "train_naive_bayes",
    "RnnConfig", "RnnModel", "one_hot_encode", "rnn_forward", "train_rnn",
    "LinearSvmModel", "train_linear_svm",
    "DecisionTreeModel", "gini_index", "train_decision_tree",
]
