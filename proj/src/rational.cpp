#include "pearl/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace pearl {

namespace {

mpz_class parse_integer(std::string_view text, std::string_view whole)
{
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '-' || text[i] == '+'))
        ++i;
    if (i == text.size())
        throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    for (std::size_t j = i; j < text.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(text[j])))
            throw std::invalid_argument("malformed rational: '" + std::string(whole) + "'");
    std::string digits(text);
    if (digits.front() == '+')
        digits.erase(0, 1);
    return mpz_class(digits, 10);
}

} // namespace

Rational::Rational(long num, long den)
{
    if (den == 0)
        throw std::invalid_argument("zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational Rational::parse(std::string_view text)
{
    const auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_integer(text, text));
    const mpz_class num = parse_integer(text.substr(0, slash), text);
    const mpz_class den = parse_integer(text.substr(slash + 1), text);
    if (den == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(mpq_class(num, den));
}

std::string Rational::to_string() const
{
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::to_short_string() const
{
    if (is_integer())
        return value_.get_num().get_str();
    return to_string();
}

Rational& Rational::operator/=(const Rational& o)
{
    if (o.is_zero())
        throw std::domain_error("division by zero");
    value_ /= o.value_;
    return *this;
}

void Rational::add_product(const Rational& a, const Rational& b)
{
    if (a.is_integer() && b.is_integer() && is_integer()) {
        mpz_addmul(value_.get_num_mpz_t(), a.value_.get_num_mpz_t(), b.value_.get_num_mpz_t());
        return;
    }
    value_ += a.value_ * b.value_;
}

} // namespace pearl
