//! Tables shipped with the crate.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::table::{ModularPolynomialTable, ReducedTable};
use crate::arith::int::Integer;
use crate::arith::Zn;
use crate::error::{Error, Result};

/// Modulus of the application-instance tables.
pub const APP_MODULUS: u64 = 95_802_919;

const INTEGER_TABLES: &[(u64, &str)] = &[
    (2, include_str!("../../data/modpoly/phi_2.txt")),
    (3, include_str!("../../data/modpoly/phi_3.txt")),
    (4, include_str!("../../data/modpoly/phi_4.txt")),
    (5, include_str!("../../data/modpoly/phi_5.txt")),
    (7, include_str!("../../data/modpoly/phi_7.txt")),
    (9, include_str!("../../data/modpoly/phi_9.txt")),
    (11, include_str!("../../data/modpoly/phi_11.txt")),
    (13, include_str!("../../data/modpoly/phi_13.txt")),
    (25, include_str!("../../data/modpoly/phi_25.txt")),
    (49, include_str!("../../data/modpoly/phi_49.txt")),
];

const APP_TABLES: &[(u64, &str)] = &[
    (3, include_str!("../../data/modpoly/app/phi_3.txt")),
    (5, include_str!("../../data/modpoly/app/phi_5.txt")),
    (7, include_str!("../../data/modpoly/app/phi_7.txt")),
    (11, include_str!("../../data/modpoly/app/phi_11.txt")),
    (23, include_str!("../../data/modpoly/app/phi_23.txt")),
    (31, include_str!("../../data/modpoly/app/phi_31.txt")),
    (37, include_str!("../../data/modpoly/app/phi_37.txt")),
    (41, include_str!("../../data/modpoly/app/phi_41.txt")),
    (43, include_str!("../../data/modpoly/app/phi_43.txt")),
    (47, include_str!("../../data/modpoly/app/phi_47.txt")),
    (53, include_str!("../../data/modpoly/app/phi_53.txt")),
    (59, include_str!("../../data/modpoly/app/phi_59.txt")),
    (61, include_str!("../../data/modpoly/app/phi_61.txt")),
    (67, include_str!("../../data/modpoly/app/phi_67.txt")),
    (73, include_str!("../../data/modpoly/app/phi_73.txt")),
    (83, include_str!("../../data/modpoly/app/phi_83.txt")),
    (89, include_str!("../../data/modpoly/app/phi_89.txt")),
    (97, include_str!("../../data/modpoly/app/phi_97.txt")),
    (101, include_str!("../../data/modpoly/app/phi_101.txt")),
    (107, include_str!("../../data/modpoly/app/phi_107.txt")),
    (109, include_str!("../../data/modpoly/app/phi_109.txt")),
    (127, include_str!("../../data/modpoly/app/phi_127.txt")),
    (137, include_str!("../../data/modpoly/app/phi_137.txt")),
    (139, include_str!("../../data/modpoly/app/phi_139.txt")),
];

type Cache = Mutex<HashMap<u64, Arc<ModularPolynomialTable>>>;

fn cached(cache: &'static OnceLock<Cache>, list: &[(u64, &str)], level: u64) -> Result<Arc<ModularPolynomialTable>> {
    let cache = cache.get_or_init(Default::default);
    if let Some(t) = cache.lock().unwrap().get(&level) {
        return Ok(t.clone());
    }
    let text = list
        .iter()
        .find(|(l, _)| *l == level)
        .map(|(_, t)| *t)
        .ok_or(Error::MissingModularPolynomial(level))?;
    let t = Arc::new(ModularPolynomialTable::parse(text)?);
    cache.lock().unwrap().insert(level, t.clone());
    Ok(t)
}

/// Levels with exact integer tables.
pub fn integer_levels() -> Vec<u64> {
    INTEGER_TABLES.iter().map(|t| t.0).collect()
}

/// Levels with tables known modulo `APP_MODULUS`.
pub fn app_levels() -> Vec<u64> {
    APP_TABLES.iter().map(|t| t.0).collect()
}

/// Whether some shipped table gives Phi_level modulo `modulus`.
pub fn available(level: u64, modulus: u64) -> bool {
    integer_levels().contains(&level) || (APP_MODULUS % modulus == 0 && app_levels().contains(&level))
}

/// Exact integer table for Phi_level.
pub fn builtin(level: u64) -> Result<Arc<ModularPolynomialTable>> {
    static C: OnceLock<Cache> = OnceLock::new();
    cached(&C, INTEGER_TABLES, level)
}

/// Table of Phi_level modulo `APP_MODULUS`.
pub fn builtin_app(level: u64) -> Result<Arc<ModularPolynomialTable>> {
    static C: OnceLock<Cache> = OnceLock::new();
    cached(&C, APP_TABLES, level)
}

/// Phi_level reduced into `ring`, from whichever shipped table applies.
/// Results are cached per (level, modulus).
pub fn reduced(level: u64, ring: Zn) -> Result<Arc<ReducedTable>> {
    static C: OnceLock<Mutex<HashMap<(u64, u64), Arc<ReducedTable>>>> = OnceLock::new();
    let cache = C.get_or_init(Default::default);
    let key = (level, ring.modulus());
    if let Some(t) = cache.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let table = match builtin(level) {
        Ok(t) => t,
        Err(_) if Integer::from(APP_MODULUS) % ring.modulus_big() == Integer::from(0) => builtin_app(level)?,
        Err(e) => return Err(e),
    };
    let r = Arc::new(table.reduce(ring)?);
    cache.lock().unwrap().insert(key, r.clone());
    Ok(r)
}
