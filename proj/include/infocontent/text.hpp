#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace infocontent {

// Unicode NFC normalization of UTF-8 text.
std::string nfc(std::string_view utf8);

// Splits on Unicode white space, strips leading and trailing punctuation from
// each piece and NFC-normalizes it. Pieces that are all punctuation vanish.
// Case is preserved.
std::vector<std::string> tokenize(std::string_view utf8);

}  // namespace infocontent
