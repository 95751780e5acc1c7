"""Character-level many-to-one recurrent classifier.

A vanilla tanh recurrence reads the input sequence and the final hidden
state feeds a softmax layer:

    h_0 = 0
    h_t = tanh(W_xh s_t + W_hh h_{t-1} + b_h)
    p   = softmax(W_hy h_T + b_y)

Characters are one-hot encoded over printable ASCII plus UNK and an
end-of-sequence symbol; sequences are truncated at ``max_len`` positions.
Three input modes exist:

* ``text``     - character one-hots only;
* ``layout``   - the 16 layout features, one per timestep, each written
                 into its own input slot;
* ``combined`` - the 16 layout timesteps first, then the character
                 one-hots (shifted past the 16 layout slots).

Every timestep therefore has exactly one active input slot, which the
implementation exploits: sequences are kept as (slot, value) pairs and
W_xh is only ever touched column-wise.

Training is backpropagation through time with Adam and cross-entropy
loss, mini-batched and fully seeded.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .io import MODEL_FORMAT_VERSION, array_from_json, array_to_json, check_header

ASCII_PRINTABLE = "".join(chr(c) for c in range(32, 127))
LAYOUT_SLOTS = 16

# (slot index, value) pairs; exactly one active input slot per timestep.
Steps = list[tuple[int, float]]


@dataclass(frozen=True)
class RnnConfig:
    input_mode: str = "text"             # text | layout | combined
    hidden_size: int = 20
    max_len: int = 100
    epochs: int = 30
    learning_rate: float = 0.001
    batch_size: int = 10
    seed: int = 0
    alphabet: str = ASCII_PRINTABLE
    init_scale: float = 0.05
    recurrent_gain: float = 0.9          # scale of the identity part of W_hh
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8
    # stop once training accuracy reaches this level (None = run all epochs)
    target_train_accuracy: float | None = None


def input_dim(input_mode: str, alphabet: str) -> int:
    chars = len(alphabet) + 2            # + UNK + EOS
    if input_mode == "text":
        return chars
    if input_mode == "layout":
        return LAYOUT_SLOTS
    if input_mode == "combined":
        return LAYOUT_SLOTS + chars
    raise ValueError(f"unknown input mode: {input_mode!r}")


def _char_indices(text: str, char_index: dict[str, int], unk: int, eos: int,
                  max_len: int) -> list[int]:
    indices = [char_index.get(c, unk) for c in text[:max_len]]
    if len(text) < max_len:
        indices.append(eos)
    return indices


def one_hot_encode(text: str, alphabet: str = ASCII_PRINTABLE,
                   max_len: int = 100) -> np.ndarray:
    """Encode a line as a (T, len(alphabet)+2) one-hot matrix.

    Unknown characters map to the dedicated UNK row; an end-of-sequence
    symbol terminates the encoding unless truncation at ``max_len``
    already consumed every position.  Each row has exactly one 1.
    """
    char_index = {c: i for i, c in enumerate(alphabet)}
    unk = len(alphabet)
    eos = len(alphabet) + 1
    indices = _char_indices(text, char_index, unk, eos, max_len)
    matrix = np.zeros((len(indices), len(alphabet) + 2))
    matrix[np.arange(len(indices)), indices] = 1.0
    return matrix


def encode_sample(sample, input_mode: str, alphabet: str = ASCII_PRINTABLE,
                  max_len: int = 100) -> Steps:
    """Turn a raw sample into (slot, value) steps for the given mode.

    ``text`` expects a string, ``layout`` a length-16 vector, and
    ``combined`` a (layout vector, string) pair.
    """
    char_index = {c: i for i, c in enumerate(alphabet)}
    unk = len(alphabet)
    eos = len(alphabet) + 1
    if input_mode == "text":
        return [(i, 1.0) for i in _char_indices(sample, char_index, unk, eos,
                                                max_len)]
    if input_mode == "layout":
        layout = np.asarray(sample, dtype=np.float64)
        if layout.shape != (LAYOUT_SLOTS,):
            raise ValueError(f"layout sample must have {LAYOUT_SLOTS} values")
        return [(i, float(v)) for i, v in enumerate(layout)]
    if input_mode == "combined":
        layout, text = sample
        layout = np.asarray(layout, dtype=np.float64)
        if layout.shape != (LAYOUT_SLOTS,):
            raise ValueError(f"layout part must have {LAYOUT_SLOTS} values")
        steps: Steps = [(i, float(v)) for i, v in enumerate(layout)]
        steps.extend((LAYOUT_SLOTS + i, 1.0)
                     for i in _char_indices(text, char_index, unk, eos, max_len))
        return steps
    raise ValueError(f"unknown input mode: {input_mode!r}")


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max()
    exp = np.exp(shifted)
    return exp / exp.sum()


@dataclass
class RnnModel:
    input_mode: str
    alphabet: str
    max_len: int
    hidden_size: int
    classes: np.ndarray
    w_xh: np.ndarray                     # (H, D_in)
    w_hh: np.ndarray                     # (H, H)
    w_hy: np.ndarray                     # (C, H)
    b_h: np.ndarray                      # (H,)
    b_y: np.ndarray                      # (C,)
    training_loss: list[float] = field(default_factory=list)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def input_dim(self) -> int:
        return self.w_xh.shape[1]

    def encode(self, sample) -> Steps:
        return encode_sample(sample, self.input_mode, self.alphabet,
                             self.max_len)

    def forward_steps(self, steps: Steps) -> np.ndarray:
        """Class probabilities after reading the whole sequence."""
        h = np.zeros(self.hidden_size)
        for slot, value in steps:
            h = np.tanh(self.w_xh[:, slot] * value + self.w_hh @ h + self.b_h)
        return _softmax(self.w_hy @ h + self.b_y)

    def predict_proba(self, samples: list) -> np.ndarray:
        return np.array([self.forward_steps(self.encode(s)) for s in samples])

    def predict(self, samples: list) -> np.ndarray:
        return self.classes[np.argmax(self.predict_proba(samples), axis=1)]

    def to_json(self) -> str:
        return json.dumps({
            "version": MODEL_FORMAT_VERSION,
            "kind": "rnn",
            "input_mode": self.input_mode,
            "alphabet": self.alphabet,
            "max_len": self.max_len,
            "hidden_size": self.hidden_size,
            "classes": self.classes.tolist(),
            "w_xh": array_to_json(self.w_xh),
            "w_hh": array_to_json(self.w_hh),
            "w_hy": array_to_json(self.w_hy),
            "b_h": array_to_json(self.b_h),
            "b_y": array_to_json(self.b_y),
        })

    @classmethod
    def from_json(cls, payload: str) -> "RnnModel":
        data = json.loads(payload)
        check_header(data, "rnn")
        return cls(
            input_mode=data["input_mode"],
            alphabet=data["alphabet"],
            max_len=int(data["max_len"]),
            hidden_size=int(data["hidden_size"]),
            classes=np.asarray(data["classes"], dtype=np.int64),
            w_xh=array_from_json(data["w_xh"]),
            w_hh=array_from_json(data["w_hh"]),
            w_hy=array_from_json(data["w_hy"]),
            b_h=array_from_json(data["b_h"]),
            b_y=array_from_json(data["b_y"]),
        )


def rnn_forward(model: RnnModel, seq: np.ndarray) -> np.ndarray:
    """Run the recurrence over a dense (T, input_dim) one-hot matrix.

    The hidden state starts at exactly zero; the softmax output of the
    final step is returned and sums to 1.
    """
    seq = np.asarray(seq, dtype=np.float64)
    if seq.ndim != 2 or seq.shape[1] != model.input_dim:
        raise ValueError(
            f"sequence must be (T, {model.input_dim}), got {seq.shape}")
    h = np.zeros(model.hidden_size)
    for x in seq:
        h = np.tanh(model.w_xh @ x + model.w_hh @ h + model.b_h)
    return _softmax(model.w_hy @ h + model.b_y)


def batch_loss(model: RnnModel, batch: list[tuple[Steps, int]]) -> float:
    """Mean cross-entropy of encoded (steps, class index) pairs."""
    if not batch:
        raise ValueError("empty batch")
    total = 0.0
    for steps, target in batch:
        probs = model.forward_steps(steps)
        total -= np.log(probs[target])
    return total / len(batch)


def batch_loss_and_grads(model: RnnModel, batch: list[tuple[Steps, int]],
                         ) -> tuple[float, dict[str, np.ndarray]]:
    """Mean loss plus analytic gradients for every parameter.

    Gradients come from full backpropagation through time of the tanh
    recurrence, averaged over the batch.
    """
    if not batch:
        raise ValueError("empty batch")
    grads = {
        "w_xh": np.zeros_like(model.w_xh),
        "w_hh": np.zeros_like(model.w_hh),
        "w_hy": np.zeros_like(model.w_hy),
        "b_h": np.zeros_like(model.b_h),
        "b_y": np.zeros_like(model.b_y),
    }
    total = 0.0
    for steps, target in batch:
        hs = [np.zeros(model.hidden_size)]
        for slot, value in steps:
            hs.append(np.tanh(model.w_xh[:, slot] * value
                              + model.w_hh @ hs[-1] + model.b_h))
        probs = _softmax(model.w_hy @ hs[-1] + model.b_y)
        total -= np.log(probs[target])

        dlogits = probs.copy()
        dlogits[target] -= 1.0
        grads["w_hy"] += np.outer(dlogits, hs[-1])
        grads["b_y"] += dlogits
        dh = model.w_hy.T @ dlogits
        for t in range(len(steps) - 1, -1, -1):
            slot, value = steps[t]
            da = dh * (1.0 - hs[t + 1] ** 2)
            grads["w_xh"][:, slot] += da * value
            grads["w_hh"] += np.outer(da, hs[t])
            grads["b_h"] += da
            dh = model.w_hh.T @ da
    n = len(batch)
    for g in grads.values():
        g /= n
    return total / n, grads


def _init_model(config: RnnConfig, classes: np.ndarray,
                rng: np.random.Generator) -> RnnModel:
    hidden = config.hidden_size
    dim = input_dim(config.input_mode, config.alphabet)
    # identity-leaning recurrence keeps early-sequence evidence alive
    w_hh = (config.recurrent_gain * np.eye(hidden)
            + rng.normal(0.0, config.init_scale, (hidden, hidden)))
    return RnnModel(
        input_mode=config.input_mode,
        alphabet=config.alphabet,
        max_len=config.max_len,
        hidden_size=hidden,
        classes=classes,
        w_xh=rng.normal(0.0, config.init_scale, (hidden, dim)),
        w_hh=w_hh,
        w_hy=rng.normal(0.0, config.init_scale, (len(classes), hidden)),
        b_h=np.zeros(hidden),
        b_y=np.zeros(len(classes)),
    )


def train_rnn(samples: list[tuple[object, int]], config: RnnConfig) -> RnnModel:
    """Train on (sample, label) pairs; sample type depends on input mode.

    Runs seeded mini-batch Adam over BPTT gradients, recording the mean
    cross-entropy of every step in ``model.training_loss``.  When
    ``config.target_train_accuracy`` is set, training stops at the end of
    the first epoch whose training accuracy reaches it.
    """
    if not samples:
        raise ValueError("empty batch")
    labels = np.array([label for _, label in samples], dtype=np.int64)
    classes = np.unique(labels)
    if len(classes) < 2:
        raise ValueError("training data contains a single class")
    class_index = {label: i for i, label in enumerate(classes.tolist())}

    rng = np.random.default_rng(config.seed)
    model = _init_model(config, classes, rng)
    encoded = [(model.encode(sample), class_index[label])
               for sample, label in samples]

    adam_m = {name: np.zeros_like(p) for name, p in _params(model).items()}
    adam_v = {name: np.zeros_like(p) for name, p in _params(model).items()}
    step = 0
    for _ in range(config.epochs):
        order = rng.permutation(len(encoded))
        for start in range(0, len(encoded), config.batch_size):
            batch = [encoded[i] for i in order[start:start + config.batch_size]]
            loss, grads = batch_loss_and_grads(model, batch)
            model.training_loss.append(loss)
            step += 1
            params = _params(model)
            for name, g in grads.items():
                adam_m[name] = (config.adam_beta1 * adam_m[name]
                                + (1 - config.adam_beta1) * g)
                adam_v[name] = (config.adam_beta2 * adam_v[name]
                                + (1 - config.adam_beta2) * g * g)
                m_hat = adam_m[name] / (1 - config.adam_beta1 ** step)
                v_hat = adam_v[name] / (1 - config.adam_beta2 ** step)
                params[name] -= (config.learning_rate * m_hat
                                 / (np.sqrt(v_hat) + config.adam_epsilon))
        if config.target_train_accuracy is not None:
            correct = sum(
                int(np.argmax(model.forward_steps(steps)) == target)
                for steps, target in encoded)
            if correct / len(encoded) >= config.target_train_accuracy:
                break
    return model


def _params(model: RnnModel) -> dict[str, np.ndarray]:
    return {"w_xh": model.w_xh, "w_hh": model.w_hh, "w_hy": model.w_hy,
            "b_h": model.b_h, "b_y": model.b_y}
