//! Python bindings: a `Session` over one local field, exchanging JSON strings.

use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::json;

use tatezeta::arith::parse_rational;
use tatezeta::characters::{Character, LambdaParam};
use tatezeta::fourier::{fourier, fourier_shell, Sign};
use tatezeta::localfield::{LocalField, LocalFieldParams};
use tatezeta::padic::PadicContext;
use tatezeta::serial;
use tatezeta::suites::{self, Suite};
use tatezeta::zeta::{rho_closed, rho_from_h, zeta_integral, zeta_shell};

fn py_err(e: tatezeta::Error) -> PyErr {
    PyValueError::new_err(format!("{}: {e}", e.kind()))
}

fn parse(s: &str) -> PyResult<serde_json::Value> {
    serde_json::from_str(s).map_err(|e| py_err(tatezeta::Error::Parse(e.to_string())))
}

#[pyclass(frozen)]
struct Session {
    field: Arc<LocalField>,
}

impl Session {
    fn character(&self, level: i64, char_index: usize, lambda: &str) -> tatezeta::Result<Character> {
        let chi = Character::all_of_level(&self.field, level)?
            .into_iter()
            .nth(char_index)
            .ok_or_else(|| tatezeta::Error::BadParameter(format!("no character {char_index} of level {level}")))?;
        let lambda = if lambda == "FORMAL" {
            LambdaParam::formal()
        } else {
            LambdaParam::rational(parse_rational(lambda)?, &self.field)
        };
        Ok(chi.with_lambda(lambda))
    }
}

#[pymethods]
impl Session {
    #[new]
    #[pyo3(signature = (ell=3, e=1, p=5, n_root=4, conductor=None))]
    fn new(ell: u64, e: u32, p: u64, n_root: u32, conductor: Option<u64>) -> PyResult<Self> {
        let mut params = LocalFieldParams::new(ell, e, p, n_root).map_err(py_err)?;
        if let Some(m) = conductor {
            params = params.with_conductor(m).map_err(py_err)?;
        }
        Ok(Session {
            field: LocalField::new(params).map_err(py_err)?,
        })
    }

    /// Session parameters as JSON.
    fn config(&self) -> String {
        let p = self.field.params();
        json!({"ell": p.ell, "e": p.e, "p": p.p, "n_root": p.n_root, "M": p.conductor, "delta": self.field.delta()})
            .to_string()
    }

    /// Fourier transform of a step/shell function given as JSON.
    #[pyo3(signature = (function, inverse=false))]
    fn transform(&self, function: &str, inverse: bool) -> PyResult<String> {
        let f = serial::shell_from_json(&self.field, &parse(function)?).map_err(py_err)?;
        let sign = if inverse { Sign::ZetaInv } else { Sign::Zeta };
        let out = if f.tails.is_empty() {
            serial::step_to_json(&fourier(&f.step, sign).map_err(py_err)?)
        } else {
            serial::shell_to_json(&fourier_shell(&f, sign).map_err(py_err)?)
        };
        Ok(out.to_string())
    }

    /// Z(f, χ̃χ_λ) for the `char_index`-th character of the given level.
    #[pyo3(signature = (function, level=0, char_index=0, lam="FORMAL"))]
    fn zeta(&self, function: &str, level: i64, char_index: usize, lam: &str) -> PyResult<String> {
        let f = serial::shell_from_json(&self.field, &parse(function)?).map_err(py_err)?;
        let chi = self.character(level, char_index, lam).map_err(py_err)?;
        let z = if f.tails.is_empty() {
            zeta_integral(&f.step, &chi)
        } else {
            zeta_shell(&f, &chi)
        }
        .map_err(py_err)?;
        Ok(serial::zeta_value_to_json(&z).to_string())
    }

    /// ρ in closed form and from h_n, with their equality verdict.
    #[pyo3(signature = (level=0, char_index=0))]
    fn rho(&self, level: i64, char_index: usize) -> PyResult<String> {
        let chi = self.character(level, char_index, "FORMAL").map_err(py_err)?;
        let a = rho_closed(&chi).map_err(py_err)?;
        let b = rho_from_h(&chi).map_err(py_err)?;
        Ok(json!({
            "rho_closed": serial::zeta_value_to_json(&a),
            "rho_from_h": serial::zeta_value_to_json(&b),
            "equal": a.value.equals(&b.value),
        })
        .to_string())
    }

    /// Number of characters whose minimal level is `level`.
    fn count_characters(&self, level: i64) -> PyResult<usize> {
        Ok(Character::all_of_level(&self.field, level).map_err(py_err)?.len())
    }

    /// p-adic embedding metadata.
    #[pyo3(signature = (precision=40))]
    fn padic_context(&self, precision: u32) -> PyResult<String> {
        let ctx = PadicContext::new(self.field.cyc(), self.field.params().p, precision).map_err(py_err)?;
        Ok(ctx.to_json().to_string())
    }
}

/// Runs a verification suite over the reference configurations; returns the report JSON.
#[pyfunction]
#[pyo3(signature = (suite, cases=5, seed=0))]
fn verify(suite: &str, cases: usize, seed: u64) -> PyResult<String> {
    let suite: Suite = suite.parse().map_err(py_err)?;
    Ok(suites::run(suite, cases, seed).map_err(py_err)?.to_json().to_string())
}

#[pymodule]
fn tatezeta_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Session>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
