use serde::Serialize;

use super::{FieldElement, FieldError};

/// Dense matrix over [`FieldElement`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
}

#[derive(Serialize)]
struct Dump<'a> {
    rows: usize,
    cols: usize,
    entries: &'a [Vec<String>],
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![FieldElement::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElement>>) -> Result<Self, FieldError> {
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(FieldError::Dimension("ragged rows".into()));
        }
        let n = rows.len();
        Ok(Self { rows: n, cols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &FieldElement {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Columns selected by `idx`, in that order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let rows = (0..self.rows).map(|r| idx.iter().map(|&c| self.get(r, c).clone()).collect()).collect();
        Self::from_rows(rows).unwrap_or_else(|_| Self::zeros(self.rows, idx.len()))
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>, FieldError> {
        if v.len() != self.cols {
            return Err(FieldError::Dimension(format!("{} columns vs vector of length {}", self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = FieldElement::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    /// Gauss-Jordan elimination; the pivot in each column is the first
    /// nonzero entry at or below the current row.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in col..m.cols {
                    if m.get(row, c).is_zero() {
                        continue;
                    }
                    let v = m.get(r, c) - &(&factor * m.get(row, c));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of the right null space, one vector per free column, each with
    /// a `1` in its free column.
    pub fn kernel(&self) -> Vec<Vec<FieldElement>> {
        let ech = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![FieldElement::zero(); self.cols];
                v[f] = FieldElement::one();
                for (i, &p) in ech.pivots.iter().enumerate() {
                    v[p] = -ech.matrix.get(i, f);
                }
                v
            })
            .collect()
    }

    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|r| self.row(r).iter().map(FieldElement::to_exact_string).collect()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows = self.to_string_rows();
        serde_json::to_value(Dump { rows: self.rows, cols: self.cols, entries: &rows }).expect("serialisable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use proptest::prelude::*;

    fn int_matrix(rows: &[&[i64]]) -> ExactMatrix {
        ExactMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&n| FieldElement::from_int(n)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn identity_has_trivial_kernel() {
        assert!(ExactMatrix::identity(4).kernel().is_empty());
        assert_eq!(ExactMatrix::identity(4).rank(), 4);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let z = ExactMatrix::zeros(3, 5);
        assert_eq!(z.kernel().len(), 5);
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn small_kernel() {
        let m = int_matrix(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).unwrap().iter().all(FieldElement::is_zero));
        assert!(m.mul_vec(&[FieldElement::one()]).is_err());
    }

    #[test]
    fn kernel_over_tower() {
        let s2 = FieldElement::sqrt_of_rational(&Rational::from_integer(2.into()));
        let one = FieldElement::one();
        // rows (1, sqrt2) and (sqrt2, 2) are dependent
        let m = ExactMatrix::from_rows(vec![vec![one.clone(), s2.clone()], vec![s2.clone(), FieldElement::from_int(2)]])
            .unwrap();
        assert_eq!(m.rank(), 1);
        let k = m.kernel();
        assert_eq!(k[0], vec![-s2, one]);
    }

    fn tower_entry() -> impl Strategy<Value = FieldElement> {
        (prop::sample::select(vec![1i64, 2, 3, -1]), -3i64..=3).prop_map(|(m, c)| {
            FieldElement::sqrt_of_rational(&Rational::from_integer(m.into())).scale(&Rational::from_integer(c.into()))
        })
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(
            entries in prop::collection::vec(tower_entry(), 12),
            rows in 1usize..=4,
        ) {
            let cols = 12 / rows;
            let data: Vec<Vec<FieldElement>> =
                entries.chunks(cols).take(rows).map(|c| c.to_vec()).collect();
            let m = ExactMatrix::from_rows(data).unwrap();
            let k = m.kernel();
            prop_assert_eq!(k.len() + m.rank(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(FieldElement::is_zero));
            }
        }
    }
}
