//! Scene files: a field, a seed and named objects, as versioned JSON.
//!
//! Elements of `F_p` are JSON integers in `[0, p)`; rationals are strings
//! `"a/b"` in lowest terms with positive denominator (`"a"` is accepted on
//! input). Spinor coordinates follow the subset order of [`crate::spinor`].

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::Subspace;
use crate::spinor::{Half, HalfSpinor, VecV, DIM_HALF, DIM_V};

pub const SCHEMA: &str = "spinor10-scene/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ambient {
    #[serde(rename = "V")]
    V,
    #[serde(rename = "S+")]
    SPlus,
    #[serde(rename = "S-")]
    SMinus,
}

impl Ambient {
    pub fn dim(self) -> usize {
        match self {
            Ambient::V => DIM_V,
            _ => DIM_HALF,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SceneObject {
    Vector(VecV),
    Spinor(HalfSpinor),
    Subspace { ambient: Ambient, space: Subspace },
    /// `K ⊂ S₋` defining the section `X_K`.
    Section(Subspace),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedObject {
    pub name: String,
    pub object: SceneObject,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scene {
    pub field: FieldSpec,
    pub seed: u64,
    pub objects: Vec<NamedObject>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum RawObject {
    Vector {
        name: String,
        coords: Vec<Value>,
    },
    Spinor {
        name: String,
        half: Half,
        coords: Vec<Value>,
    },
    Subspace {
        name: String,
        ambient: Ambient,
        basis: Vec<Vec<Value>>,
    },
    Section {
        name: String,
        basis: Vec<Vec<Value>>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    schema: String,
    field: RawField,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    objects: Vec<RawObject>,
}

fn at(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Scene(format!("at `{path}`: {msg}"))
}

fn parse_field(raw: &RawField) -> Result<FieldSpec> {
    match (raw.kind.as_str(), raw.p) {
        ("prime", Some(p)) => FieldSpec::prime(p).map_err(|e| at("field.p", e)),
        ("prime", None) => Err(at("field", "missing `p`")),
        ("rationals", None) => Ok(FieldSpec::Rationals),
        ("rationals", Some(_)) => Err(at("field", "`p` is not allowed for the rationals")),
        (other, _) => Err(at("field.kind", format!("unknown field kind {other:?}"))),
    }
}

fn parse_scalar(field: FieldSpec, v: &Value, path: &str) -> Result<Scalar> {
    match (field, v) {
        (FieldSpec::Prime { p }, Value::Number(n)) => match n.as_u64() {
            Some(x) if x < p as u64 => Ok(field.from_i64(x as i64)),
            _ => Err(at(path, format!("{n} is not an element of F_{p} (expected an integer in [0, {p}))"))),
        },
        (FieldSpec::Rationals, Value::String(s)) => Scalar::parse_rational(s).map_err(|e| at(path, e)),
        (FieldSpec::Rationals, Value::Number(n)) if n.is_i64() => Ok(field.from_i64(n.as_i64().expect("checked"))),
        (FieldSpec::Prime { p }, other) => Err(at(path, format!("expected an integer in [0, {p}), found {other}"))),
        (FieldSpec::Rationals, other) => Err(at(path, format!("expected a rational string \"a/b\", found {other}"))),
    }
}

fn parse_coords(field: FieldSpec, values: &[Value], len: usize, path: &str) -> Result<Vec<Scalar>> {
    if values.len() != len {
        return Err(at(path, format!("expected {len} coordinates, found {}", values.len())));
    }
    values
        .iter()
        .enumerate()
        .map(|(i, v)| parse_scalar(field, v, &format!("{path}[{i}]")))
        .collect()
}

fn parse_basis(field: FieldSpec, rows: &[Vec<Value>], len: usize, path: &str) -> Result<Subspace> {
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| parse_coords(field, r, len, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Subspace::span(field, len, rows))
}

fn parse_object(field: FieldSpec, raw: &RawObject, i: usize) -> Result<NamedObject> {
    let path = |f: &str| format!("objects[{i}].{f}");
    let (name, object) = match raw {
        RawObject::Vector { name, coords } => (
            name,
            SceneObject::Vector(VecV::new(parse_coords(field, coords, DIM_V, &path("coords"))?)),
        ),
        RawObject::Spinor { name, half, coords } => (
            name,
            SceneObject::Spinor(HalfSpinor::new(*half, parse_coords(field, coords, DIM_HALF, &path("coords"))?)),
        ),
        RawObject::Subspace { name, ambient, basis } => (
            name,
            SceneObject::Subspace {
                ambient: *ambient,
                space: parse_basis(field, basis, ambient.dim(), &path("basis"))?,
            },
        ),
        RawObject::Section { name, basis } => (
            name,
            SceneObject::Section(parse_basis(field, basis, DIM_HALF, &path("basis"))?),
        ),
    };
    Ok(NamedObject {
        name: name.clone(),
        object,
    })
}

/// Parses a scene. Syntax and schema errors carry the line, column and
/// field path; value errors carry the field path.
pub fn parse_scene(text: &str) -> Result<Scene> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawScene = serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.inner();
        Error::Scene(format!(
            "line {}, column {}: at `{}`: {}",
            inner.line(),
            inner.column(),
            e.path(),
            inner
        ))
    })?;
    if raw.schema != SCHEMA {
        return Err(at("schema", format!("unsupported schema {:?} (expected {SCHEMA:?})", raw.schema)));
    }
    let field = parse_field(&raw.field)?;
    let objects = raw
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| parse_object(field, o, i))
        .collect::<Result<Vec<_>>>()?;
    let mut names: Vec<&str> = objects.iter().map(|o| o.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(at("objects", format!("duplicate object name {:?}", w[0])));
    }
    Ok(Scene {
        field,
        seed: raw.seed,
        objects,
    })
}

pub fn scalar_value(x: &Scalar) -> Value {
    match x {
        Scalar::Mod { value, .. } => Value::from(*value),
        Scalar::Rat(r) => Value::String(format!("{}/{}", r.numer(), r.denom())),
    }
}

pub fn coords_value(xs: &[Scalar]) -> Vec<Value> {
    xs.iter().map(scalar_value).collect()
}

pub fn basis_value(sub: &Subspace) -> Vec<Vec<Value>> {
    sub.basis_rows().iter().map(|r| coords_value(r)).collect()
}

/// Canonical pretty-printed JSON; subspaces are written in echelon form.
pub fn emit_scene(scene: &Scene) -> String {
    let field = match scene.field {
        FieldSpec::Prime { p } => RawField {
            kind: "prime".into(),
            p: Some(p),
        },
        FieldSpec::Rationals => RawField {
            kind: "rationals".into(),
            p: None,
        },
    };
    let objects = scene
        .objects
        .iter()
        .map(|o| {
            let name = o.name.clone();
            match &o.object {
                SceneObject::Vector(v) => RawObject::Vector {
                    name,
                    coords: coords_value(v.coords()),
                },
                SceneObject::Spinor(s) => RawObject::Spinor {
                    name,
                    half: s.half(),
                    coords: coords_value(s.coords()),
                },
                SceneObject::Subspace { ambient, space } => RawObject::Subspace {
                    name,
                    ambient: *ambient,
                    basis: basis_value(space),
                },
                SceneObject::Section(k) => RawObject::Section {
                    name,
                    basis: basis_value(k),
                },
            }
        })
        .collect();
    let raw = RawScene {
        schema: SCHEMA.into(),
        field,
        seed: scene.seed,
        objects,
    };
    let mut out = serde_json::to_string_pretty(&raw).expect("scene serializes");
    out.push('\n');
    out
}

impl Scene {
    pub fn new(field: FieldSpec, seed: u64) -> Self {
        Scene {
            field,
            seed,
            objects: Vec::new(),
        }
    }

    pub fn push(&mut self, name: impl Into<String>, object: SceneObject) {
        self.objects.push(NamedObject {
            name: name.into(),
            object,
        });
    }

    /// The named object, or the first one when `name` is `None`.
    pub fn get(&self, name: Option<&str>) -> Result<&SceneObject> {
        match name {
            Some(n) => self
                .objects
                .iter()
                .find(|o| o.name == n)
                .map(|o| &o.object)
                .ok_or_else(|| Error::Scene(format!("no object named {n:?}"))),
            None => self
                .objects
                .first()
                .map(|o| &o.object)
                .ok_or_else(|| Error::Scene("scene has no objects".into())),
        }
    }
}
