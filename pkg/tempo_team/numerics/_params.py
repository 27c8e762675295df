# -*- coding: utf-8 -*-
"""
The flat store of trainable tensors and its JSON checkpoint format.
"""

import collections.abc
import json
import pathlib
import typing as ty

import numpy as np

from ._tensor import ShapeError, Tensor

__all__ = ('ParamStore', 'glorot_uniform')


def glorot_uniform(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    """Xavier/Glorot uniform initialisation of a ``fan_in x fan_out`` matrix."""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


class ParamStore(collections.abc.Mapping):
    """Ordered mapping from parameter name to trainable tensor."""

    def __init__(self, arrays: ty.Optional[ty.Mapping[str, ty.Any]] = None):
        self._params: ty.Dict[str, Tensor] = {}
        for name, array in (arrays or {}).items():
            self.add(name, array)

    def add(self, name: str, array) -> Tensor:
        if name in self._params:
            raise ValueError(f"Parameter '{name}' already exists.")
        tensor = Tensor(array, requires_grad=True, name=name)
        self._params[name] = tensor
        return tensor

    def param_count(self) -> int:
        return sum(tensor.size for tensor in self._params.values())

    def arrays(self) -> ty.Dict[str, np.ndarray]:
        """Copies of the current values, keyed by name."""
        return {name: tensor.numpy() for name, tensor in self._params.items()}

    def assign(self, arrays: ty.Mapping[str, np.ndarray]) -> None:
        """Overwrite values in place, keeping tensor identities."""
        for name, array in arrays.items():
            tensor = self._params[name]
            array = np.array(array, dtype=np.float64)
            if array.shape != tensor.shape:
                raise ShapeError(f"Parameter '{name}': shape mismatch {tensor.shape} vs {array.shape}")
            tensor.data = array

    def to_dict(self) -> dict:
        return {
            name: {
                'shape': list(tensor.shape),
                'values': tensor.data.reshape(-1).tolist()
            } for name, tensor in self._params.items()
        }

    @classmethod
    def from_dict(cls, content: ty.Mapping[str, ty.Mapping]) -> 'ParamStore':
        store = cls()
        for name, entry in content.items():
            shape = tuple(entry['shape'])
            values = np.array(entry['values'], dtype=np.float64)
            if values.size != int(np.prod(shape)):
                raise ShapeError(f"Parameter '{name}': {values.size} values do not fill shape {shape}")
            store.add(name, values.reshape(shape))
        return store

    def save(self, path: ty.Union[str, pathlib.Path]) -> None:
        with open(path, 'w', encoding='utf8') as handle:
            json.dump(self.to_dict(), handle)

    @classmethod
    def load(cls, path: ty.Union[str, pathlib.Path]) -> 'ParamStore':
        with open(path, encoding='utf8') as handle:
            return cls.from_dict(json.load(handle))

    def __getitem__(self, name: str) -> Tensor:
        return self._params[name]

    def __iter__(self):
        return iter(self._params)

    def __len__(self):
        return len(self._params)
