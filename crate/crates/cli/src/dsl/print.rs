use std::fmt;

use jetlie_core::CommutatorTable;
use jetlie_kernel::{Expr, Substitution, Symbol};

use super::{Item, SourceUnit};

fn sorted(s: &Substitution, skip: Symbol) -> Vec<(Symbol, &Expr)> {
    let mut v: Vec<(Symbol, &Expr)> = s.iter().filter(|(k, _)| **k != skip).map(|(k, e)| (*k, e)).collect();
    v.sort_by(|a, b| a.0.name().cmp(b.0.name()));
    v
}

fn coefficient(e: &Expr) -> String {
    if e.is_one() {
        return String::new();
    }
    if e.neg().is_one() {
        return "-".into();
    }
    if e.constant_value().is_some() && !e.to_string().contains('/') {
        return format!("{}*", e);
    }
    format!("({})*", e)
}

pub(crate) fn write_table(f: &mut fmt::Formatter<'_>, name: &str, t: &CommutatorTable) -> fmt::Result {
    writeln!(f, "table {} ({}) {{", name, t.names().join(", "))?;
    for (a, b, combo) in t.entries() {
        let mut rhs = String::new();
        for (i, (n, c)) in combo.iter().enumerate() {
            let term = format!("{}{}", coefficient(c), n);
            match (i, term.strip_prefix('-')) {
                (0, _) => rhs.push_str(&term),
                (_, Some(rest)) => rhs.push_str(&format!(" - {}", rest)),
                _ => rhs.push_str(&format!(" + {}", term)),
            }
        }
        writeln!(f, "  [{}, {}] = {};", a, b, rhs)?;
    }
    for (a, b) in t.out_of_range_pairs() {
        writeln!(f, "  [{}, {}] = out;", a, b)?;
    }
    write!(f, "}}")
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Space(s) => write!(f, "{}", s),
            Item::Param(ps) => {
                let names: Vec<&str> = ps.iter().map(|s| s.name()).collect();
                write!(f, "param {};", names.join(", "))
            }
            Item::Assume { space, expr } => write!(f, "assume {}: {} > 0;", space, expr),
            Item::Expr { name, space, expr } => write!(f, "expr {} on {} = {};", name, space, expr),
            Item::Field(v) => write!(f, "{}", v),
            Item::System(s) => {
                writeln!(f, "system {} on {} {{", s.name(), s.space().name())?;
                for e in s.equations() {
                    writeln!(f, "  {} = 0;", e)?;
                }
                let solved: Vec<String> = s.solved().iter().map(|(k, e)| format!("{} = {}", k, e)).collect();
                if !solved.is_empty() {
                    writeln!(f, "  solve {};", solved.join(", "))?;
                }
                write!(f, "}}")
            }
            Item::Transform(t) => {
                let p = t.parameter();
                writeln!(f, "transform {} on {} with {} {{", t.name(), t.space().name(), p)?;
                for (s, e) in t.base_maps() {
                    writeln!(f, "  {} -> {};", s, e)?;
                }
                for (s, v) in t.relations() {
                    writeln!(f, "  relation {}^2 = {};", s, v)?;
                }
                let id = sorted(t.at_zero(), p);
                if !id.is_empty() {
                    let v: Vec<String> = id.iter().map(|(k, e)| format!("{} = {}", k, e)).collect();
                    writeln!(f, "  identity {};", v.join(", "))?;
                }
                let se = sorted(t.series(), p);
                if !se.is_empty() {
                    let v: Vec<String> = se.iter().map(|(k, e)| format!("{} = {}", k, e)).collect();
                    writeln!(f, "  series {};", v.join(", "))?;
                }
                if t.order() > 0 {
                    writeln!(f, "  prolong {};", t.order())?;
                }
                write!(f, "}}")
            }
            Item::Table { name, table } => write_table(f, name, table),
        }
    }
}

impl fmt::Display for SourceUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for st in &self.statements {
            writeln!(f, "{}", st.item)?;
        }
        Ok(())
    }
}
