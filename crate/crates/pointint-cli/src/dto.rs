//! JSON wire formats: tagged parameter forms, complex numbers as [re, im],
//! extended reals with "inf".

use num_complex::Complex;
use serde::Deserialize;
use serde_json::{json, Value};

use pointint::dirac::DiracParams;
use pointint::params::{
    ExtReal, InteractionParams, LambdaParams, SeparatedParams, UnitaryParams,
};

use crate::Failure;

pub enum AnyParams {
    Schrodinger(InteractionParams<f64>),
    Dirac(DiracParams<f64>),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum HDto {
    Number(f64),
    Tag(String),
}

impl HDto {
    fn to_ext(&self, field: &str) -> Result<ExtReal<f64>, String> {
        match self {
            HDto::Number(x) => Ok(ExtReal::Finite(*x)),
            HDto::Tag(s) if s == "inf" => Ok(ExtReal::Infinity),
            HDto::Tag(s) => Err(format!("{field}: expected a number or \"inf\", got '{s}'")),
        }
    }
}

#[derive(Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", deny_unknown_fields)]
enum ParamsDto {
    Lambda {
        phi: f64,
        a: f64,
        b: f64,
        c: f64,
        d: f64,
    },
    Unitary {
        theta: f64,
        z: [f64; 2],
        w: [f64; 2],
    },
    Separated {
        h_plus: HDto,
        h_minus: HDto,
    },
    Dirac {
        phi_r: f64,
        a_r: f64,
        b_r: f64,
        c_r: f64,
        d_r: f64,
    },
    DiracSeparated {
        h_r_plus: HDto,
        h_r_minus: HDto,
    },
}

pub fn parse_params(text: &str) -> Result<AnyParams, Failure> {
    let dto: ParamsDto = serde_json::from_str(text)
        .map_err(|e| Failure::validation("invalid_input", format!("bad parameter JSON: {e}")))?;
    let bad = |d: String| Failure::validation("invalid_input", d);
    Ok(match dto {
        ParamsDto::Lambda { phi, a, b, c, d } => {
            AnyParams::Schrodinger(InteractionParams::Lambda(LambdaParams::new(phi, a, b, c, d)))
        }
        ParamsDto::Unitary { theta, z, w } => {
            AnyParams::Schrodinger(InteractionParams::Unitary(UnitaryParams::new(
                theta,
                Complex::new(z[0], z[1]),
                Complex::new(w[0], w[1]),
            )))
        }
        ParamsDto::Separated { h_plus, h_minus } => {
            AnyParams::Schrodinger(InteractionParams::Separated(SeparatedParams::new(
                h_plus.to_ext("h_plus").map_err(bad)?,
                h_minus.to_ext("h_minus").map_err(bad)?,
            )))
        }
        ParamsDto::Dirac {
            phi_r,
            a_r,
            b_r,
            c_r,
            d_r,
        } => AnyParams::Dirac(DiracParams::NonSeparated {
            phi_r,
            a_r,
            b_r,
            c_r,
            d_r,
        }),
        ParamsDto::DiracSeparated { h_r_plus, h_r_minus } => AnyParams::Dirac(DiracParams::Separated {
            h_r_plus: h_r_plus.to_ext("h_r_plus").map_err(bad)?,
            h_r_minus: h_r_minus.to_ext("h_r_minus").map_err(bad)?,
        }),
    })
}

pub fn complex_json(z: Complex<f64>) -> Value {
    json!([z.re, z.im])
}

pub fn ext_real_json(h: &ExtReal<f64>) -> Value {
    match h {
        ExtReal::Finite(x) => json!(x),
        ExtReal::Infinity => json!("inf"),
    }
}

pub fn interaction_json(p: &InteractionParams<f64>) -> Value {
    match p {
        InteractionParams::Lambda(l) => json!({
            "form": "lambda",
            "phi": l.phi, "a": l.a, "b": l.b, "c": l.c, "d": l.d,
        }),
        InteractionParams::Separated(s) => json!({
            "form": "separated",
            "h_plus": ext_real_json(&s.h_plus),
            "h_minus": ext_real_json(&s.h_minus),
        }),
        InteractionParams::Unitary(u) => json!({
            "form": "unitary",
            "theta": u.theta,
            "z": complex_json(u.z),
            "w": complex_json(u.w),
        }),
    }
}

/// Substitute the sweep variable into a Schrodinger member; returns the
/// member and the wavenumber to use (1.0 when the variable is a parameter
/// and no k applies — sweeps over parameters still need scattering at some
/// k, fixed at 1).
pub fn apply_schrodinger_var(
    base: &InteractionParams<f64>,
    var: &str,
    value: f64,
) -> Result<(InteractionParams<f64>, f64), String> {
    if var == "k" {
        if value <= 0.0 {
            return Err(format!("k must be positive, got {value}"));
        }
        return Ok((*base, value));
    }
    match base {
        InteractionParams::Lambda(l) => {
            let mut l = *l;
            // ad - bc = 1 is restored through the dependent entry d, except
            // when sweeping d itself (then a compensates)
            match var {
                "phi" => l.phi = value,
                "a" => l.a = value,
                "b" => l.b = value,
                "c" | "gamma" => l.c = value,
                "d" => {
                    l.d = value;
                    l.a = (1.0 + l.b * l.c) / l.d;
                    return Ok((InteractionParams::Lambda(l), 1.0));
                }
                other => return Err(format!("unknown sweep variable '{other}'")),
            }
            if var != "phi" {
                if l.a == 0.0 {
                    return Err("a = 0 leaves d undetermined".into());
                }
                l.d = (1.0 + l.b * l.c) / l.a;
            }
            Ok((InteractionParams::Lambda(l), 1.0))
        }
        InteractionParams::Separated(s) => {
            let mut s = *s;
            match var {
                "h_plus" => s.h_plus = ExtReal::Finite(value),
                "h_minus" => s.h_minus = ExtReal::Finite(value),
                other => return Err(format!("unknown sweep variable '{other}'")),
            }
            Ok((InteractionParams::Separated(s), 1.0))
        }
        InteractionParams::Unitary(_) => {
            Err("sweep over unitary-form parameters is not supported; convert to lambda".into())
        }
    }
}

/// Substitute the sweep variable into a Dirac member at fixed energy.
pub fn apply_dirac_var(
    base: &DiracParams<f64>,
    var: &str,
    value: f64,
    energy: f64,
) -> Result<(DiracParams<f64>, f64), String> {
    if var == "energy" {
        return Ok((*base, value));
    }
    match base {
        DiracParams::NonSeparated {
            phi_r,
            a_r,
            b_r,
            c_r,
            d_r,
        } => {
            let (mut phi_r, mut a_r, mut b_r, mut c_r, d_r) = (*phi_r, *a_r, *b_r, *c_r, *d_r);
            match var {
                "phi_r" => phi_r = value,
                "a_r" => a_r = value,
                "b_r" => b_r = value,
                "c_r" | "gamma" => c_r = value,
                other => return Err(format!("unknown sweep variable '{other}'")),
            }
            let d_r = if var == "phi_r" {
                d_r
            } else {
                if a_r == 0.0 {
                    return Err("a_r = 0 leaves d_r undetermined".into());
                }
                (1.0 + b_r * c_r) / a_r
            };
            Ok((
                DiracParams::NonSeparated {
                    phi_r,
                    a_r,
                    b_r,
                    c_r,
                    d_r,
                },
                energy,
            ))
        }
        DiracParams::Separated { h_r_plus, h_r_minus } => {
            let (mut hp, mut hm) = (*h_r_plus, *h_r_minus);
            match var {
                "h_r_plus" => hp = ExtReal::Finite(value),
                "h_r_minus" => hm = ExtReal::Finite(value),
                other => return Err(format!("unknown sweep variable '{other}'")),
            }
            Ok((
                DiracParams::Separated {
                    h_r_plus: hp,
                    h_r_minus: hm,
                },
                energy,
            ))
        }
    }
}
