#include "amplipix/compose.hpp"

#include <optional>

namespace amplipix {

namespace {

std::optional<LetterMethod> letter_from_char(char ch) {
    switch (ch) {
        case 'A': return LetterMethod::A;
        case 'B': return LetterMethod::B;
        case 'C': return LetterMethod::C;
        case 'D': return LetterMethod::D;
        case 'W': return LetterMethod::W;
        case 'X': return LetterMethod::X;
        case 'Y': return LetterMethod::Y;
        case 'Z': return LetterMethod::Z;
        default: return std::nullopt;
    }
}

}  // namespace

MethodExpr parse_expr(std::string_view text) {
    if (text.empty()) {
        throw ParseError("empty method expression", 0);
    }
    MethodExpr expr;
    bool saw_sharpened = false;
    bool saw_bare = false;
    std::size_t pos = 0;
    while (true) {
        if (pos >= text.size()) {
            throw ParseError("expected a term after '+'", pos);
        }
        bool pre_sharpened = false;
        if (text[pos] == 's') {
            pre_sharpened = true;
            ++pos;
            if (pos >= text.size()) {
                throw ParseError("expected a letter after 's'", pos);
            }
        }
        const auto letter = letter_from_char(text[pos]);
        if (!letter) {
            throw ParseError(std::string("unknown letter '") + text[pos] +
                                 "', expected one of A,B,C,D,W,X,Y,Z",
                             pos);
        }
        ++pos;
        expr.terms.push_back(MethodTerm{*letter, pre_sharpened});
        (pre_sharpened ? saw_sharpened : saw_bare) = true;
        if (saw_sharpened && saw_bare) {
            throw ParseError("mixed sharpened and bare terms", pos - 1);
        }
        if (pos == text.size()) {
            break;
        }
        if (text[pos] != '+') {
            throw ParseError(std::string("unexpected character '") +
                                 text[pos] + "'",
                             pos);
        }
        ++pos;
    }
    expr.whole_expr_sharpened = saw_bare;
    return expr;
}

std::string render_expr(const MethodExpr& expr) {
    std::string out;
    for (std::size_t i = 0; i < expr.terms.size(); ++i) {
        if (i > 0) {
            out += '+';
        }
        if (expr.terms[i].pre_sharpened) {
            out += 's';
        }
        out += letter_name(expr.terms[i].letter);
    }
    return out;
}

ImageBuf evaluate(const MethodExpr& expr, const ImageBuf& img,
                  const AmplifyParams& amplify_params,
                  const SharpenParams& sharpen_params) {
    if (expr.terms.empty()) {
        throw Error("evaluate: expression has no terms");
    }
    std::vector<double> sum(img.sample_count(), 0.0);
    for (const MethodTerm& term : expr.terms) {
        ImageBuf out = letter_method(img, term.letter, amplify_params);
        if (term.pre_sharpened) {
            out = sharpen_complex(out, sharpen_params);
        }
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += out.data[i];
        }
    }
    ImageBuf average(img.height, img.width, img.channels);
    const double inv_n = 1.0 / static_cast<double>(expr.terms.size());
    for (std::size_t i = 0; i < sum.size(); ++i) {
        average.data[i] = static_cast<float>(sum[i] * inv_n);
    }
    if (expr.whole_expr_sharpened) {
        average = sharpen_complex(average, sharpen_params);
    }
    return clip01(average);
}

ImageBuf evaluate(std::string_view expr_text, const ImageBuf& img,
                  const AmplifyParams& amplify_params,
                  const SharpenParams& sharpen_params) {
    return evaluate(parse_expr(expr_text), img, amplify_params,
                    sharpen_params);
}

}  // namespace amplipix
