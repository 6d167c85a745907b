"""Floating-point dense-tensor simulator used as an independent oracle.

States are numpy arrays with one axis per register.  Measurements are applied
by contracting basis vectors against the measured axes; nothing here calls
the exact simulator's state or measurement functions.
"""

import numpy as np


class DenseSystem:
    def __init__(self, system):
        self.names = [r.name for r in system.registers]
        self.labels = [list(r.labels) for r in system.registers]
        self.ready = [r.ready_label for r in system.registers]
        self.shape = tuple(len(l) for l in self.labels)

    def axis(self, name):
        return self.names.index(name)

    def index(self, name, label):
        return self.labels[self.axis(name)].index(label)

    def from_exact(self, state):
        psi = np.zeros(self.shape)
        for assignment, c in state.terms.items():
            idx = tuple(self.labels[i].index(lab) for i, lab in enumerate(assignment))
            psi[idx] = float(c)
        return psi

    def vector(self, basis_vector):
        axes = [self.axis(n) for n in basis_vector.subsystems]
        t = np.zeros(tuple(self.shape[a] for a in axes))
        for labels, c in basis_vector.components:
            t[tuple(self.labels[a].index(lab) for a, lab in zip(axes, labels))] = float(c)
        return axes, t

    def branch(self, psi, basis_vector):
        """Contract ``<b|psi>``; result has the remaining axes in system order."""
        axes, t = self.vector(basis_vector)
        return np.tensordot(psi, t, axes=(axes, list(range(len(axes))))), axes, t

    def embed(self, amp, axes, t):
        rest = [i for i in range(len(self.shape)) if i not in axes]
        full = np.multiply.outer(amp, t)
        return np.transpose(full, np.argsort(rest + axes))

    def entangle(self, psi, basis, recorder, outcome_map):
        r = self.axis(recorder)
        ready = self.index(recorder, self.ready[r])
        out = np.zeros_like(psi)
        for v in basis.vectors:
            amp, axes, t = self.branch(psi, v)
            proj = self.embed(amp, axes, t)
            src = [slice(None)] * psi.ndim
            dst = [slice(None)] * psi.ndim
            src[r] = ready
            dst[r] = self.index(recorder, outcome_map[v.name])
            out[tuple(dst)] += proj[tuple(src)]
        return out

    def prob_label(self, psi, register, label):
        idx = [slice(None)] * psi.ndim
        idx[self.axis(register)] = self.index(register, label)
        return float(np.sum(psi[tuple(idx)] ** 2))

    def prob_vector(self, psi, basis_vector):
        amp, _, _ = self.branch(psi, basis_vector)
        return float(np.sum(amp ** 2))

    @staticmethod
    def norm2(psi):
        return float(np.sum(psi ** 2))
