use thiserror::Error;

/// Why a set of facts fails to form a valid statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum StatementError {
    #[error("a statement must contain at least one fact")]
    EmptyStatement,
    #[error("the facts have an empty intersection")]
    EmptyIntersection,
}

/// Why a pair (inputs, outputs) fails to form a valid task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TaskError {
    #[error("the input set is empty")]
    EmptyInputs,
    #[error("the output set is empty")]
    EmptyOutputs,
    #[error("the input set must be a proper subset of the language")]
    InputsEqualLanguage,
    #[error("an output is not a completion of any input")]
    OutputsOutsideExtension,
    #[error("strict mode forbids outputs equal to the full input extension")]
    OutputsEqualExtension,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("state index {index} out of range for a {n}-state space")]
    StateOutOfRange { index: usize, n: usize },
    #[error("guardrail {name} = {limit} exceeded (requested {requested})")]
    Guardrail {
        name: &'static str,
        limit: u64,
        requested: u64,
    },
    #[error("budget {name} = {limit} exceeded (needed {needed}); use sampling instead")]
    BudgetExceeded {
        name: &'static str,
        limit: u64,
        needed: u64,
    },
    #[error("vocabulary facts must be distinct (fact {index} repeats an earlier fact)")]
    DuplicateFact { index: usize },
    #[error("fact index {index} out of range for a {len}-fact vocabulary")]
    FactOutOfRange { index: usize, len: usize },
    #[error("statement is not a member of the language")]
    NotInLanguage,
    #[error("tasks belong to different languages or modes")]
    LanguageMismatch,
    #[error("input is not one of the task's inputs")]
    InputNotInTask,
    #[error("invalid statement: {0}")]
    InvalidStatement(#[from] StatementError),
    #[error("invalid task: {0}")]
    InvalidTask(#[from] TaskError),
    #[error("operation requires an exhaustively enumerated task universe")]
    RequiresExhaustive,
    #[error("child size {m} must satisfy 1 <= m < |I| = {inputs}")]
    ChildSizeOutOfRange { m: usize, inputs: usize },
    #[error("no valid child task found within {attempts} attempts")]
    ChildSearchExhausted { attempts: u32 },
    #[error("no task could be sampled within {attempts} attempts")]
    SamplerExhausted { attempts: u32 },
    #[error("{what} requires at least one {needed}")]
    NothingToSample {
        what: &'static str,
        needed: &'static str,
    },
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
