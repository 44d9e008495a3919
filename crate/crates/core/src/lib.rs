pub mod checker;
pub mod fott;
pub mod lts;
pub mod mucalc;
pub mod mucompile;
pub mod pathregex;
pub mod syntax;
pub mod timednet;
