#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "amplipix/amplify.hpp"
#include "amplipix/sharpen.hpp"

namespace amplipix {

// One letter method, optionally sharpened before averaging.
struct MethodTerm {
    LetterMethod letter;
    bool pre_sharpened = false;
};

// Parsed composition such as "A+X" or "sA+sC+sX+sZ". Bare combinations are
// sharpened once after averaging; 's'-prefixed terms are each sharpened
// before averaging (never both).
struct MethodExpr {
    std::vector<MethodTerm> terms;
    bool whole_expr_sharpened = false;
};

// Grammar: expr := term ('+' term)* ; term := 's'? LETTER ;
// LETTER in {A,B,C,D,W,X,Y,Z}. Either every term carries the 's' prefix or
// none does; mixed forms are rejected. Throws ParseError with the offending
// position.
MethodExpr parse_expr(std::string_view text);

// Canonical text form; parse_expr(render_expr(e)) round-trips.
std::string render_expr(const MethodExpr& expr);

// Evaluate each term with letter_method, sharpen pre-sharpened terms with
// sharpen_complex, average elementwise, sharpen the average when the whole
// expression is sharpened, and clip to [0,1].
ImageBuf evaluate(const MethodExpr& expr, const ImageBuf& img,
                  const AmplifyParams& amplify_params,
                  const SharpenParams& sharpen_params);

ImageBuf evaluate(std::string_view expr_text, const ImageBuf& img,
                  const AmplifyParams& amplify_params,
                  const SharpenParams& sharpen_params);

}  // namespace amplipix
