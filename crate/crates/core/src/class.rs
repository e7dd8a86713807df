//! Support classes and the shared result line format.

use std::fmt;
use std::str::FromStr;

use crate::database::TransactionDatabase;
use crate::itemset::{ItemSet, Support};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    /// `support >= sigma`
    Frequent,
    /// `0 < support < sigma`
    Rare,
    /// `support == 0`
    NonPresent,
}

impl Class {
    pub fn of(support: usize, sigma: usize) -> Class {
        if support == 0 {
            Class::NonPresent
        } else if support < sigma {
            Class::Rare
        } else {
            Class::Frequent
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Class::Frequent => "FREQUENT",
            Class::Rare => "RARE",
            Class::NonPresent => "NONPRESENT",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Which classes the bottom-up miner reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Emit {
    Rare,
    NonPresent,
    #[default]
    Both,
}

impl Emit {
    pub fn admits(self, class: Class) -> bool {
        match self {
            Emit::Rare => class == Class::Rare,
            Emit::NonPresent => class == Class::NonPresent,
            Emit::Both => matches!(class, Class::Rare | Class::NonPresent),
        }
    }
}

impl FromStr for Emit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rare" => Ok(Emit::Rare),
            "nonpresent" => Ok(Emit::NonPresent),
            "both" => Ok(Emit::Both),
            other => Err(format!(
                "unknown emit filter '{other}' (expected rare, nonpresent or both)"
            )),
        }
    }
}

/// `<label1> <label2> ... : <support> <TAG>`, without the trailing newline.
pub fn result_line(
    db: &TransactionDatabase,
    set: &ItemSet,
    support: Support,
    class: Class,
) -> String {
    format!("{} : {} {}", db.render(set), support, class.tag())
}
