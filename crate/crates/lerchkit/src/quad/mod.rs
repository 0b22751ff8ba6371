pub mod de;
pub mod expr;
pub mod reduce;
pub mod registry;
