#pragma once

#include <stdexcept>
#include <string>

namespace thetaq
{

// Root of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

#define THETAQ_DEFINE_ERROR(name)                                                                                    \
    class name : public Error                                                                                         \
    {                                                                                                                 \
    public:                                                                                                           \
        using Error::Error;                                                                                           \
    }

THETAQ_DEFINE_ERROR(DivisionByZero);
THETAQ_DEFINE_ERROR(IncompatibleOrder);
THETAQ_DEFINE_ERROR(ZeroSeries);
THETAQ_DEFINE_ERROR(OrderTooHigh);
THETAQ_DEFINE_ERROR(DomainError);
THETAQ_DEFINE_ERROR(UnknownRelation);
THETAQ_DEFINE_ERROR(UnknownIdentity);
THETAQ_DEFINE_ERROR(NonconvergentTau);
THETAQ_DEFINE_ERROR(PoleOnContour);
THETAQ_DEFINE_ERROR(ParseError);

#undef THETAQ_DEFINE_ERROR

} // namespace thetaq
