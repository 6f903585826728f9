//! Exact computational finite projective geometry over small field towers
//! GF(q) < GF(q^n): subgeometries and their splashes on projective lines,
//! linear sets under field reduction, tangent-splash counting, and the
//! projective-equivalence machinery connecting them. Everything is verified
//! by brute-force enumeration at desk scale; no floating point anywhere.

pub mod cli;
pub mod equiv;
pub mod fieldred;
pub mod gf;
pub mod mat;
pub mod projgeom;
pub mod splash;
pub mod subgeo;

pub use fieldred::{FieldRedError, LinearSet, LinearSetClass, ReductionContext, SpreadElement};
pub use gf::{Field, FieldElement, GfError, Poly, SubfieldEmbedding};
pub use mat::Mat;
pub use projgeom::{Collineation, GeomError, ProjPoint, ProjSubspace};
pub use splash::{Splash, SplashError, SplashKind, Subline};
pub use subgeo::{LinePosition, SubHyperplane, Subgeometry, SubgeoError};
