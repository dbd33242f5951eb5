use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tf::{RationalTF, TfMatrix};

/// External excitation `r_k` entering node `node` through an optional
/// coloring filter. `u = R r` with `R` binary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Excitation {
    pub label: String,
    pub r_index: usize,
    pub node: usize,
    pub variance: f64,
    pub filter: Option<RationalTF>,
    pub pe: bool,
}

impl Excitation {
    pub fn white(r_index: usize, node: usize, variance: f64) -> Self {
        Excitation {
            label: format!("r{r_index}"),
            r_index,
            node,
            variance,
            filter: None,
            pe: true,
        }
    }

    pub fn is_present(&self) -> bool {
        self.variance > 0.0
    }
}

/// `w = G w + H e + R r`. Noise source `e_l` drives column `l` of `H`; a zero
/// diagonal entry in `noise_cov` marks `e_l` absent.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub labels: Vec<String>,
    pub g: TfMatrix,
    pub h: TfMatrix,
    pub noise_cov: DMatrix<f64>,
    pub excitations: Vec<Excitation>,
}

impl Network {
    /// Network with no modules, identity noise model and zero noise covariance.
    pub fn empty(labels: Vec<String>) -> Self {
        let l = labels.len();
        Network {
            labels,
            g: TfMatrix::zeros(l, l),
            h: TfMatrix::identity(l),
            noise_cov: DMatrix::zeros(l, l),
            excitations: vec![],
        }
    }

    /// Nodes labelled `w1..wL`.
    pub fn with_nodes(l: usize) -> Self {
        Self::empty((1..=l).map(|k| format!("w{k}")).collect())
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn node(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn node_or_err(&self, label: &str) -> Result<usize> {
        self.node(label).ok_or_else(|| Error::UnknownLabel {
            label: label.to_string(),
            pointer: String::new(),
        })
    }

    /// `G_{to,from}`.
    pub fn set_module(&mut self, from: usize, to: usize, tf: RationalTF) {
        self.g.set(to, from, tf);
    }

    pub fn module(&self, from: usize, to: usize) -> &RationalTF {
        self.g.get(to, from)
    }

    pub fn set_noise_variance(&mut self, l: usize, var: f64) {
        self.noise_cov[(l, l)] = var;
    }

    pub fn add_excitation(&mut self, node: usize, variance: f64) -> usize {
        let idx = self.excitations.iter().map(|e| e.r_index).max().unwrap_or(0) + 1;
        self.excitations.push(Excitation {
            label: format!("r{}", idx),
            ..Excitation::white(idx, node, variance)
        });
        self.excitations.len() - 1
    }

    /// Add or replace the excitation labelled `label`.
    pub fn set_excitation(&mut self, label: &str, node: usize, variance: f64) {
        if let Some(e) = self.excitations.iter_mut().find(|e| e.label == label) {
            e.node = node;
            e.variance = variance;
            return;
        }
        let idx = self.excitations.iter().map(|e| e.r_index).max().unwrap_or(0) + 1;
        self.excitations.push(Excitation {
            label: label.to_string(),
            ..Excitation::white(idx, node, variance)
        });
    }

    pub fn remove_excitation(&mut self, label: &str) {
        self.excitations.retain(|e| e.label != label);
    }

    pub fn excitation(&self, label: &str) -> Option<usize> {
        self.excitations.iter().position(|e| e.label == label)
    }

    pub fn noise_label(&self, l: usize) -> String {
        let lab = &self.labels[l];
        match lab.strip_prefix('w') {
            Some(rest) if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) => {
                format!("e{rest}")
            }
            _ => format!("e_{lab}"),
        }
    }

    pub fn noise_present(&self, l: usize) -> bool {
        self.noise_cov[(l, l)] > 0.0
    }

    pub fn present_noises(&self) -> Vec<usize> {
        (0..self.size()).filter(|&l| self.noise_present(l)).collect()
    }

    pub fn present_excitations(&self) -> Vec<usize> {
        (0..self.excitations.len())
            .filter(|&k| self.excitations[k].is_present())
            .collect()
    }

    /// Binary `R` (L × K).
    pub fn r_matrix(&self) -> DMatrix<f64> {
        let mut r = DMatrix::zeros(self.size(), self.excitations.len());
        for (k, e) in self.excitations.iter().enumerate() {
            r[(e.node, k)] = 1.0;
        }
        r
    }

    /// Nodes that noise source `l` enters directly.
    pub fn noise_targets(&self, l: usize) -> Vec<usize> {
        (0..self.size()).filter(|&m| !self.h.get(m, l).is_zero()).collect()
    }

    /// Source labels in the canonical order `(r_1..r_K, e_1..e_L)`.
    pub fn source_labels(&self) -> Vec<String> {
        self.excitations
            .iter()
            .map(|e| e.label.clone())
            .chain((0..self.size()).map(|l| self.noise_label(l)))
            .collect()
    }
}
