"""
Smith normal form and homology over the local ring Z/p^N

Kernels are read integrally: a pivot that vanishes mod p^N is treated as
zero, and any factor whose exponent reaches N is flagged as saturated so the
caller can escalate N.
"""
import logging

from app.errors import CompositionNonzero
from app.models.matrix import HomologyGroup, PModMatrix, SNFResult, object_identity
from app.models.witt import p_valuation

logger = logging.getLogger(__name__)


class LinalgService:
    """SNF over Z/p^N plus ker/im homology"""

    @staticmethod
    def snf(matrix: PModMatrix) -> SNFResult:
        """
        left * M * right diagonal with non-decreasing exponents

        Pivot: first minimal-valuation entry in row-major order.
        """
        p, N, mod = matrix.p, matrix.N, matrix.modulus
        A = matrix.entries.copy() % mod
        rows, cols = A.shape
        L, L_inv = object_identity(rows), object_identity(rows)
        R, R_inv = object_identity(cols), object_identity(cols)
        diag = []

        for k in range(min(rows, cols)):
            best = None
            for r in range(k, rows):
                for c in range(k, cols):
                    entry = int(A[r, c])
                    if entry:
                        v = p_valuation(entry, p)
                        if best is None or v < best[0]:
                            best = (v, r, c)
                if best is not None and best[0] == 0:
                    break
            if best is None:
                diag.extend([N] * (min(rows, cols) - k))
                break

            v, r, c = best
            if r != k:
                A[[k, r]] = A[[r, k]]
                L[[k, r]] = L[[r, k]]
                L_inv[:, [k, r]] = L_inv[:, [r, k]]
            if c != k:
                A[:, [k, c]] = A[:, [c, k]]
                R[:, [k, c]] = R[:, [c, k]]
                R_inv[[k, c]] = R_inv[[c, k]]

            pivot_power = p ** v
            unit = int(A[k, k]) // pivot_power
            unit_inv = pow(unit, -1, mod)
            A[k, :] = A[k, :] * unit_inv % mod
            L[k, :] = L[k, :] * unit_inv % mod
            L_inv[:, k] = L_inv[:, k] * unit % mod

            for r in range(k + 1, rows):
                entry = int(A[r, k])
                if entry:
                    t = entry // pivot_power
                    A[r, :] = (A[r, :] - t * A[k, :]) % mod
                    L[r, :] = (L[r, :] - t * L[k, :]) % mod
                    L_inv[:, k] = (L_inv[:, k] + t * L_inv[:, r]) % mod
            for c in range(k + 1, cols):
                entry = int(A[k, c])
                if entry:
                    t = entry // pivot_power
                    A[:, c] = (A[:, c] - t * A[:, k]) % mod
                    R[:, c] = (R[:, c] - t * R[:, k]) % mod
                    R_inv[k, :] = (R_inv[k, :] + t * R_inv[c, :]) % mod
            diag.append(v)

        return SNFResult(diag=diag, left=L, right=R, left_inv=L_inv, right_inv=R_inv, p=p, N=N)

    @staticmethod
    def rank(matrix: PModMatrix) -> int:
        return LinalgService.snf(matrix).rank

    @staticmethod
    def homology_at(d_in: PModMatrix, d_out: PModMatrix) -> HomologyGroup:
        """
        H = ker d_out / im d_in

        d_in: C_prev -> C (rows = rank C), d_out: C -> C_next (cols = rank C).
        """
        if d_in.rows != d_out.cols:
            raise ValueError(f"middle ranks differ: {d_in.rows} vs {d_out.cols}")
        p, N = d_in.p, d_in.N
        composite = d_out @ d_in
        if not composite.is_zero:
            raise CompositionNonzero(
                f"d_out * d_in != 0 mod {p}^{N} (shapes {d_out.entries.shape}, {d_in.entries.shape})"
            )

        outer = LinalgService.snf(d_out)
        middle = d_in.rows
        kernel = [c for c in range(middle) if c >= len(outer.diag) or outer.diag[c] >= N]
        if not kernel:
            return HomologyGroup(p, N, ())

        coords = outer.right_inv.dot(d_in.entries) if d_in.cols else d_in.entries
        image = PModMatrix(coords[kernel, :] % d_in.modulus, p, N)
        inner = LinalgService.snf(image)
        factors = [e for e in inner.diag if e > 0]
        factors += [N] * (len(kernel) - len(inner.diag))
        return HomologyGroup(p, N, tuple(factors))


linalg_service = LinalgService()
