use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not in the ring of integers")]
    NotIntegral,
    #[error("operands live over different discriminants")]
    DiscMismatch,
    #[error("|t| does not equal the ideal norm")]
    NormMismatch,
    #[error("idele does not lie in the kernel of the norm")]
    NotInNormKernel,
    #[error("operands violate the norm-one condition")]
    NormKernelViolation,
    #[error("group closure exceeded the budget of {0} elements")]
    ClosureBudgetExceeded(usize),
    #[error("no norm preimage found within the search bound")]
    NormSearchExhausted,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

pub type Result<T> = core::result::Result<T, Error>;
