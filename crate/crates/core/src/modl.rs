//! Unipotent and nilpotent operators over F_ℓ, their truncated log/exp, the
//! mod-ℓ monodromy filtration, and the comparison with the reduction of the
//! integral filtration.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{check_modulus, inv_mod};
use crate::exact_linalg::{cokernel_invariants, ModMatrix, Subspace};
use crate::filtration::{monodromy_filtration_rational, Filtration, NilpotentOperator};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    Unipotent,
    Nilpotent,
}

/// A square matrix over F_ℓ known to be unipotent or nilpotent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModlOperator {
    matrix: ModMatrix,
    kind: OperatorKind,
}

/// N^0, N^1, … up to the last nonzero power.
fn nonzero_powers(n: &ModMatrix) -> Vec<ModMatrix> {
    let mut out = vec![ModMatrix::identity(n.modulus(), n.nrows())];
    loop {
        let next = out.last().expect("nonempty").dot(n);
        if next.is_zero() {
            break;
        }
        out.push(next);
    }
    if out[0].is_zero() {
        out.clear();
    }
    out
}

fn check_square(m: &ModMatrix) -> Result<()> {
    check_modulus(m.modulus())?;
    if m.nrows() != m.ncols() {
        return Err(Error::shape("operator matrix must be square"));
    }
    Ok(())
}

impl ModlOperator {
    pub fn nilpotent(matrix: ModMatrix) -> Result<Self> {
        check_square(&matrix)?;
        if !matrix.pow(matrix.nrows()).is_zero() {
            return Err(Error::NotNilpotent(format!("N^{} ≠ 0 over F_{}", matrix.nrows(), matrix.modulus())));
        }
        Ok(ModlOperator { matrix, kind: OperatorKind::Nilpotent })
    }

    pub fn unipotent(matrix: ModMatrix) -> Result<Self> {
        check_square(&matrix)?;
        let n = matrix.nrows();
        let minus_one = matrix.sub(&ModMatrix::identity(matrix.modulus(), n));
        if !minus_one.pow(n).is_zero() {
            return Err(Error::NotUnipotent(format!("(U−1)^{n} ≠ 0 over F_{}", matrix.modulus())));
        }
        Ok(ModlOperator { matrix, kind: OperatorKind::Unipotent })
    }

    /// 1 + N̄ for an integral nilpotent N.
    pub fn unipotent_from_integral(op: &NilpotentOperator, ell: u64) -> Result<Self> {
        check_modulus(ell)?;
        let n = op.reduce_mod(ell);
        Self::unipotent(n.add(&ModMatrix::identity(ell, op.rank())))
    }

    pub fn ell(&self) -> u64 {
        self.matrix.modulus()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ModMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    /// U − 1 for a unipotent operator, the matrix itself for a nilpotent one.
    pub fn nilpotent_part(&self) -> ModMatrix {
        match self.kind {
            OperatorKind::Nilpotent => self.matrix.clone(),
            OperatorKind::Unipotent => self.matrix.sub(&ModMatrix::identity(self.ell(), self.dim())),
        }
    }

    fn require(&self, kind: OperatorKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::InvalidArgument(format!("expected a {kind:?} operator, got {:?}", self.kind)));
        }
        Ok(())
    }

    fn require_series(&self) -> Result<()> {
        if self.ell() < self.dim() as u64 {
            return Err(Error::ModulusTooSmall { ell: self.ell(), dim: self.dim() });
        }
        Ok(())
    }
}

impl fmt::Display for ModlOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} over F_{}: {:?}", self.kind, self.ell(), self.matrix.to_rows())
    }
}

/// log U = Σ_{1≤i≤n−1} (−1)^{i+1}/i · (U−1)^i. Needs ℓ ≥ n.
pub fn log_unipotent(u: &ModlOperator) -> Result<ModlOperator> {
    u.require(OperatorKind::Unipotent)?;
    u.require_series()?;
    let (ell, n) = (u.ell(), u.dim());
    let x = u.nilpotent_part();
    let mut acc = ModMatrix::zeros(ell, n, n);
    let mut pow = x.clone();
    for i in 1..n {
        let c = inv_mod(i as u64 % ell, ell);
        let c = if i % 2 == 0 { (ell - c) % ell } else { c };
        acc = acc.add(&pow.scale(c));
        pow = pow.dot(&x);
    }
    Ok(ModlOperator { matrix: acc, kind: OperatorKind::Nilpotent })
}

/// exp N = Σ_{0≤i≤n−1} N^i / i!. Needs ℓ ≥ n.
pub fn exp_nilpotent(m: &ModlOperator) -> Result<ModlOperator> {
    m.require(OperatorKind::Nilpotent)?;
    m.require_series()?;
    let (ell, n) = (m.ell(), m.dim());
    let mut acc = ModMatrix::zeros(ell, n, n);
    let mut pow = ModMatrix::identity(ell, n);
    let mut fact = 1u64;
    for i in 0..n {
        if i > 0 {
            fact = fact * (i as u64) % ell;
        }
        acc = acc.add(&pow.scale(inv_mod(fact, ell)));
        pow = pow.dot(&m.matrix);
    }
    Ok(ModlOperator { matrix: acc, kind: OperatorKind::Unipotent })
}

/// Monodromy filtration over F_ℓ of σ − 1.
///
/// When ℓ ≥ n the filtration of log σ is computed as well and must agree.
pub fn filtration_mod_ell(u: &ModlOperator) -> Result<Filtration<Subspace>> {
    u.require(OperatorKind::Unipotent)?;
    let full = Subspace::full(u.ell(), u.dim());
    let fil = Filtration::deligne(full.clone(), &nonzero_powers(&u.nilpotent_part()));
    if u.ell() >= u.dim() as u64 {
        let log = log_unipotent(u)?;
        let other = Filtration::deligne(full, &nonzero_powers(log.matrix()));
        if other != fil {
            return Err(Error::consistency("filtrations of σ−1 and log σ differ"));
        }
    }
    Ok(fil)
}

/// First observed failure of property (t-f) at ℓ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TfWitness {
    /// M_i ⊗ F_ℓ differs from the mod-ℓ filtration step.
    StepMismatch { index: i64, reduced_dim: usize, mod_ell_dim: usize },
    /// coker(N^i) has a divisor divisible by ℓ.
    CokernelTorsion { power: usize, divisor: BigInt },
}

impl fmt::Display for TfWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TfWitness::StepMismatch { index, reduced_dim, mod_ell_dim } => write!(
                f,
                "M_{index} mod ℓ has dimension {reduced_dim} but the mod-ℓ step has dimension {mod_ell_dim}"
            ),
            TfWitness::CokernelTorsion { power, divisor } => write!(f, "coker(N^{power}) has divisor {divisor}"),
        }
    }
}

/// Both sides of property (t-f) at one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TfCheck {
    pub ell: u64,
    /// Reduction of the integral filtration equals the mod-ℓ filtration.
    pub filtrations_agree: bool,
    /// Every coker(N^i) is free of ℓ-torsion.
    pub cokernels_torsion_free: bool,
    pub step_witness: Option<TfWitness>,
    pub torsion_witness: Option<TfWitness>,
}

impl TfCheck {
    pub fn holds(&self) -> bool {
        self.filtrations_agree && self.cokernels_torsion_free
    }
}

/// Decides property (t-f) for N at ℓ in two independent ways and checks
/// that they agree.
pub fn property_tf_check(op: &NilpotentOperator, ell: u64) -> Result<TfCheck> {
    check_modulus(ell)?;
    let integral = monodromy_filtration_rational(op).reduce_mod(ell);
    let modular = filtration_mod_ell(&ModlOperator::unipotent_from_integral(op, ell)?)?;
    let d = op.nilpotency_index() as i64;
    let step_witness = (-d - 1..=d).find_map(|i| {
        let (a, b) = (integral.step(i), modular.step(i));
        (a != b).then(|| TfWitness::StepMismatch { index: i, reduced_dim: a.dim(), mod_ell_dim: b.dim() })
    });

    let ell_big = BigInt::from(ell);
    let torsion_witness = (0..=op.nilpotency_index()).find_map(|i| {
        cokernel_invariants(&op.power_map(i))
            .torsion()
            .into_iter()
            .find(|t| (t % &ell_big).is_zero())
            .map(|divisor| TfWitness::CokernelTorsion { power: i, divisor })
    });

    let check = TfCheck {
        ell,
        filtrations_agree: step_witness.is_none(),
        cokernels_torsion_free: torsion_witness.is_none(),
        step_witness,
        torsion_witness,
    };
    if check.filtrations_agree != check.cokernels_torsion_free {
        return Err(Error::consistency(format!(
            "property (t-f) at ℓ = {ell}: filtration comparison says {}, cokernel test says {}",
            check.filtrations_agree, check.cokernels_torsion_free
        )));
    }
    Ok(check)
}
