//! Instances shipped with the binary, addressable as `fixture:<name>`.

pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub text: &'static str,
}

pub const FIXTURES: [Fixture; 3] = [
    Fixture {
        name: "intro",
        description:
            "Q1 = xy + zw, Q2 = xy - zw, Q3 = xw, Q4 = yz: Q3*Q4 lies in the ideal, neither factor in the radical",
        text: include_str!("../fixtures/intro.json"),
    },
    Fixture {
        name: "case3",
        description: "Q = xz + z^2, Q1 = xy - zw, Q2 = xy + xw - 2zw, all inside the ideal (x, z)",
        text: include_str!("../fixtures/case3.json"),
    },
    Fixture {
        name: "ek-singletons",
        description: "colored points e1 | e2 | e1 + e2",
        text: include_str!("../fixtures/ek-singletons.json"),
    },
];

pub fn get(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}
