#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub verbose: bool,
}

#[derive(Debug)]
pub enum Verbosity {
    Quiet,
    Loud,
}

pub trait Configurable {
    fn settings(&self) -> Settings;
}
