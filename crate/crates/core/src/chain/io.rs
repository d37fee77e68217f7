//! CSV (`k,value` / `row,col,value`) and JSON (`{"N","pi","P"}`) forms.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::ArgminChainKernel;
use crate::error::{Error, Result};
use crate::io::{write_matrix_csv, write_vector_csv};

#[derive(Debug, Serialize, Deserialize)]
struct KernelDocument {
    #[serde(rename = "N")]
    n: usize,
    pi: Vec<f64>,
    #[serde(rename = "P")]
    p: Vec<Vec<f64>>,
}

impl ArgminChainKernel<f64> {
    pub fn write_pi_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_vector_csv(&self.pi, writer)
    }

    pub fn write_transition_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_matrix_csv(self.size(), &self.transition, writer)
    }

    /// Reads back the two CSV tables written above.
    pub fn read_csv<R1: Read, R2: Read>(pi: R1, transition: R2) -> Result<Self> {
        let mut pi_values = Vec::new();
        for (idx, rec) in csv::Reader::from_reader(pi)
            .deserialize::<(usize, f64)>()
            .enumerate()
        {
            let (k, v) = rec?;
            if k != idx {
                return Err(Error::DimensionMismatch(format!(
                    "pi row {idx} labelled {k}"
                )));
            }
            pi_values.push(v);
        }
        let n = pi_values
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::DimensionMismatch("empty stationary table".into()))?;
        let size = n + 1;
        let mut values = vec![f64::NAN; size * size];
        let mut seen = 0;
        for rec in csv::Reader::from_reader(transition).deserialize::<(usize, usize, f64)>() {
            let (i, j, v) = rec?;
            if i >= size || j >= size {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({i},{j}) outside N={n}"
                )));
            }
            values[i * size + j] = v;
            seen += 1;
        }
        if seen != size * size {
            return Err(Error::DimensionMismatch(format!(
                "expected {} transition entries, got {seen}",
                size * size
            )));
        }
        Self::from_parts(n, pi_values, values)
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        let doc = KernelDocument {
            n: self.n,
            pi: self.pi.clone(),
            p: self.rows().map(<[f64]>::to_vec).collect(),
        };
        serde_json::to_writer(writer, &doc)?;
        Ok(())
    }

    pub fn read_json<R: Read>(reader: R) -> Result<Self> {
        let doc: KernelDocument = serde_json::from_reader(reader)?;
        let flat = doc.p.into_iter().flatten().collect();
        Self::from_parts(doc.n, doc.pi, flat)
    }
}
