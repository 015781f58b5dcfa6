/// Spellings used across the published tables for each locality.
const LOCALITIES: &[(&str, &[&str])] = &[
    ("CDMX", &["cdmx"]),
    ("Alvaro Obregon", &["alvaroobregon", "alvaroo"]),
    ("Azcapotzalco", &["azcapotzalco"]),
    ("Benito Juarez", &["benitojuarez", "bjuarez", "benitoj"]),
    ("Coyoacan", &["coyoacan"]),
    ("Cuajimalpa", &["cuajimalpa"]),
    ("Cuauhtemoc", &["cuauhtemoc"]),
    ("Gustavo A. Madero", &["gustavoamadero", "gustavoa", "gam"]),
    ("Iztacalco", &["iztacalco"]),
    ("Iztapalapa", &["iztapalapa"]),
    (
        "Magdalena Contreras",
        &["magdalenacontreras", "magcontreras", "magdalenac"],
    ),
    ("Miguel Hidalgo", &["miguelhidalgo", "miguelh"]),
    ("Milpa Alta", &["milpaalta", "milpaa"]),
    ("Tlahuac", &["tlahuac"]),
    ("Tlalpan", &["tlalpan"]),
    (
        "Venustiano Carranza",
        &["venustianocarranza", "vcarranza", "venustianoc"],
    ),
    ("Xochimilco", &["xochimilco"]),
];

/// Canonical name for any of the abbreviations the tables use, e.g.
/// `"VCarranza"` and `"Venustiano C"` both map to `"Venustiano Carranza"`.
pub fn canonical_locality(name: &str) -> Option<&'static str> {
    let key: String = name
        .chars()
        .filter(char::is_ascii_alphanumeric)
        .map(|c| c.to_ascii_lowercase())
        .collect();
    LOCALITIES
        .iter()
        .find(|(_, aliases)| aliases.contains(&key.as_str()))
        .map(|(canonical, _)| *canonical)
}
