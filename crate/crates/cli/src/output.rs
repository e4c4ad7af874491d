//! Minimal JSON/CSV emitters. All numbers carry 15 significant digits and
//! every JSON document is versioned under "schema": "steerkit/1".

use steerkit_core::CMat;

pub const SCHEMA: &str = "steerkit/1";

/// 15 significant digits, scientific.
pub fn num(x: f64) -> String {
    format!("{x:.14e}")
}

pub enum Json {
    Num(f64),
    Bool(bool),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

impl Json {
    pub fn render(&self, out: &mut String) {
        match self {
            Json::Num(x) => out.push_str(&num(*x)),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Str(s) => {
                out.push('"');
                for ch in s.chars() {
                    match ch {
                        '"' => out.push_str("\\\""),
                        '\\' => out.push_str("\\\\"),
                        c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
                        c => out.push(c),
                    }
                }
                out.push('"');
            }
            Json::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.render(out);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push('{');
                for (i, (k, v)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push('"');
                    out.push_str(k);
                    out.push_str("\":");
                    v.render(out);
                }
                out.push('}');
            }
        }
    }
}

impl std::fmt::Display for Json {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = String::new();
        self.render(&mut s);
        f.write_str(&s)
    }
}

/// Object with the schema tag in front.
pub fn document(fields: Vec<(&'static str, Json)>) -> Json {
    let mut all = vec![("schema", Json::Str(SCHEMA.to_string()))];
    all.extend(fields);
    Json::Obj(all)
}

pub fn vec3(v: [f64; 3]) -> Json {
    Json::Arr(v.iter().map(|x| Json::Num(*x)).collect())
}

/// Complex matrix as nested [re, im] pairs, row-major.
pub fn cmat(m: &CMat) -> Json {
    let mut rows = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let mut row = Vec::with_capacity(m.cols());
        for c in 0..m.cols() {
            let z = m.at(r, c);
            row.push(Json::Arr(vec![Json::Num(z.re), Json::Num(z.im)]));
        }
        rows.push(Json::Arr(row));
    }
    Json::Arr(rows)
}
