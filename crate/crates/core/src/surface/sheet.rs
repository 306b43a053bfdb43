use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::Vec2;

use super::SurfaceError;

/// Index of an affine copy `S_g`: the position of `g` in the Cayley ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CopyId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "j")]
pub enum SheetKind {
    /// The plane carrying `M`, `M^j` and the negative marks.
    Base,
    /// The three-fold cover branched over the origin.
    Cover,
    /// First plane of the buffer surface for generator `j`.
    Buffer1(usize),
    /// Second plane of the buffer surface for generator `j`.
    Buffer2(usize),
}

impl SheetKind {
    pub fn generator(self) -> Option<usize> {
        match self {
            SheetKind::Buffer1(j) | SheetKind::Buffer2(j) => Some(j),
            _ => None,
        }
    }

    /// Every kind present in one copy for a generating set of size `J`.
    pub fn all(num_generators: usize) -> Vec<SheetKind> {
        let mut kinds = vec![SheetKind::Base, SheetKind::Cover];
        for j in 1..=num_generators {
            kinds.push(SheetKind::Buffer1(j));
            kinds.push(SheetKind::Buffer2(j));
        }
        kinds
    }

    /// Number of folds: 3 on the branched cover, 1 elsewhere.
    pub fn folds(self) -> u8 {
        if self == SheetKind::Cover {
            3
        } else {
            1
        }
    }

    pub fn label(self) -> String {
        match self {
            SheetKind::Base => "base".into(),
            SheetKind::Cover => "cover".into(),
            SheetKind::Buffer1(j) => format!("buffer1:{j}"),
            SheetKind::Buffer2(j) => format!("buffer2:{j}"),
        }
    }

    pub fn parse(s: &str) -> Option<SheetKind> {
        match s {
            "base" => return Some(SheetKind::Base),
            "cover" => return Some(SheetKind::Cover),
            _ => {}
        }
        let (head, j) = s.split_once(':')?;
        let j: usize = j.parse().ok().filter(|&j| j >= 1)?;
        match head {
            "buffer1" => Some(SheetKind::Buffer1(j)),
            "buffer2" => Some(SheetKind::Buffer2(j)),
            _ => None,
        }
    }
}

impl fmt::Display for SheetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SheetId {
    pub copy: CopyId,
    pub kind: SheetKind,
}

impl SheetId {
    pub fn new(copy: CopyId, kind: SheetKind) -> Self {
        Self { copy, kind }
    }
}

impl fmt::Display for SheetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "copy {} / {}", self.copy.0, self.kind)
    }
}

/// Mark families. Families carrying a `j` are tied to generator `h_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "name", content = "j")]
pub enum Family {
    McheckJ(usize),
    L,
    Lprime,
    HjCheck(usize),
    M,
    Mj(usize),
    Mneg(usize),
    T1,
    T2,
    Mtilde,
    Ttilde1,
    Ttilde2,
}

impl Family {
    pub fn generator(self) -> Option<usize> {
        match self {
            Family::McheckJ(j) | Family::HjCheck(j) | Family::Mj(j) | Family::Mneg(j) => Some(j),
            _ => None,
        }
    }

    pub fn is_singleton(self) -> bool {
        matches!(
            self,
            Family::HjCheck(_) | Family::Mneg(_) | Family::T1 | Family::T2 | Family::Ttilde1 | Family::Ttilde2
        )
    }

    /// `T1` and `T2` on the base plane are reference segments, not slits.
    pub fn is_slit(self) -> bool {
        !matches!(self, Family::T1 | Family::T2)
    }

    /// Glued across copies rather than inside one copy.
    pub fn is_inter_copy(self) -> bool {
        matches!(self, Family::HjCheck(_) | Family::Mneg(_))
    }

    pub fn admissible_on(self, kind: SheetKind) -> bool {
        match (self, kind) {
            (Family::McheckJ(j), SheetKind::Buffer1(k)) | (Family::HjCheck(j), SheetKind::Buffer2(k)) => j == k,
            (Family::L, SheetKind::Buffer1(_)) | (Family::Lprime, SheetKind::Buffer2(_)) => true,
            (Family::M | Family::Mj(_) | Family::Mneg(_) | Family::T1 | Family::T2, SheetKind::Base) => true,
            (Family::Mtilde | Family::Ttilde1 | Family::Ttilde2, SheetKind::Cover) => true,
            _ => false,
        }
    }

    /// All families present on a sheet of the given kind, in a fixed order.
    pub fn on_sheet(kind: SheetKind, num_generators: usize) -> Vec<Family> {
        match kind {
            SheetKind::Base => {
                let mut v = vec![Family::M, Family::T1, Family::T2];
                v.extend((1..=num_generators).map(Family::Mj));
                v.extend((1..=num_generators).map(Family::Mneg));
                v
            }
            SheetKind::Cover => vec![Family::Mtilde, Family::Ttilde1, Family::Ttilde2],
            SheetKind::Buffer1(j) => vec![Family::McheckJ(j), Family::L],
            SheetKind::Buffer2(j) => vec![Family::Lprime, Family::HjCheck(j)],
        }
    }

    pub fn label(self) -> String {
        match self {
            Family::McheckJ(j) => format!("Mcheck{j}"),
            Family::L => "L".into(),
            Family::Lprime => "L'".into(),
            Family::HjCheck(j) => format!("h{j}mcheck"),
            Family::M => "M".into(),
            Family::Mj(j) => format!("M{j}"),
            Family::Mneg(j) => format!("m-{j}"),
            Family::T1 => "t1".into(),
            Family::T2 => "t2".into(),
            Family::Mtilde => "M~".into(),
            Family::Ttilde1 => "t~1".into(),
            Family::Ttilde2 => "t~2".into(),
        }
    }
}

/// A single mark: family member `index` (1-based) on a sheet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MarkRef {
    pub sheet: SheetId,
    pub family: Family,
    pub index: u64,
}

impl MarkRef {
    /// Checks admissibility and the index range (singletons use index 1).
    pub fn new(sheet: SheetId, family: Family, index: u64) -> Result<Self, SurfaceError> {
        let m = Self { sheet, family, index };
        m.check()?;
        Ok(m)
    }

    pub fn check(&self) -> Result<(), SurfaceError> {
        if !self.family.admissible_on(self.sheet.kind) {
            return Err(SurfaceError::Inadmissible(*self));
        }
        if self.index == 0 || (self.family.is_singleton() && self.index != 1) {
            return Err(SurfaceError::Inadmissible(*self));
        }
        Ok(())
    }
}

impl fmt::Display for MarkRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}] on {}", self.family.label(), self.index, self.sheet)
    }
}

/// Side of an oriented mark `p → q`; left is the side `cross(q − p, x − p) > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A point of the surface in the base chart of its copy.
#[derive(Clone, Debug, PartialEq)]
pub struct SurfacePoint<T = f64> {
    pub sheet: SheetId,
    pub fold: u8,
    pub pos: Vec2<T>,
    /// Which bank of an open slit the point sits on, if any.
    pub slit_side: Option<Side>,
}

impl<T> SurfacePoint<T> {
    pub fn new(sheet: SheetId, pos: Vec2<T>) -> Self {
        Self {
            sheet,
            fold: 0,
            pos,
            slit_side: None,
        }
    }

    pub fn on_fold(mut self, fold: u8) -> Self {
        self.fold = fold;
        self
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.slit_side = Some(side);
        self
    }
}
