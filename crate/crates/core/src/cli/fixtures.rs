use clap::ValueEnum;

/// Inputs compiled into the binary so the demos run without files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    /// No-go algebra with `theta = 0`.
    #[value(name = "nogo_a")]
    NogoA,
    /// No-go algebra with `theta(x ⊗ y) = x ⊗ first coordinate`.
    #[value(name = "nogo_b")]
    NogoB,
    /// Matrix-block algebra with nilpotent `alpha`, `beta`.
    #[value(name = "block")]
    Block,
    /// Trivial-operad algebra with a Jordan block.
    #[value(name = "trivial")]
    Trivial,
    /// Two vertices joined both ways, weights 2 and 3.
    #[value(name = "two_cycle")]
    TwoCycle,
    /// A weighted 3-cycle with a chord.
    #[value(name = "triangle")]
    Triangle,
    /// An operad whose unit composites are inconsistent.
    #[value(name = "broken_operad")]
    BrokenOperad,
}

impl Fixture {
    pub fn name(self) -> &'static str {
        match self {
            Fixture::NogoA => "nogo_a",
            Fixture::NogoB => "nogo_b",
            Fixture::Block => "block",
            Fixture::Trivial => "trivial",
            Fixture::TwoCycle => "two_cycle",
            Fixture::Triangle => "triangle",
            Fixture::BrokenOperad => "broken_operad",
        }
    }

    pub fn contents(self) -> &'static str {
        match self {
            Fixture::NogoA => include_str!("../../fixtures/nogo_a.json"),
            Fixture::NogoB => include_str!("../../fixtures/nogo_b.json"),
            Fixture::Block => include_str!("../../fixtures/block.json"),
            Fixture::Trivial => include_str!("../../fixtures/trivial.json"),
            Fixture::TwoCycle => include_str!("../../fixtures/two_cycle.json"),
            Fixture::Triangle => include_str!("../../fixtures/triangle.json"),
            Fixture::BrokenOperad => include_str!("../../fixtures/broken_operad.json"),
        }
    }
}
