"""H2 ground-state FCI/cc-pVTZ curve, total energy including 1/R, hartree.

Generated with PySCF 2.14.0:

    python3 generate_fci.py > h2_fci_ccpvtz.csv
"""
import numpy as np
from pyscf import fci, gto, scf

print("R,E")
for R in np.round(np.arange(0.4, 6.01, 0.1), 2):
    mol = gto.M(atom=f"H 0 0 0; H 0 0 {R}", unit="Bohr", basis="cc-pvtz", verbose=0)
    mf = scf.RHF(mol).run()
    e = fci.FCI(mf).kernel()[0]
    print(f"{R:.2f},{e:.8f}")
