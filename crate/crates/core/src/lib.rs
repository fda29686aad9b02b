pub mod abc;
pub mod arith;
pub mod certifier;
pub mod elliptic;
pub mod heights;
pub mod io;
pub mod szpiro;
