#include "infocontent/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "infocontent/error.hpp"

namespace infocontent {

namespace {

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || n == nullptr) throw Error(Error::Kind::kIo, "ICU NFC data unavailable");
  return *n;
}

std::string to_utf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

std::string normalize(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString normalized = nfc_instance().normalize(s, status);
  if (U_FAILURE(status)) throw InvalidArgument("NFC normalization failed");
  return to_utf8(normalized);
}

}  // namespace

std::string nfc(std::string_view utf8) {
  return normalize(icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size()))));
}

std::vector<std::string> tokenize(std::string_view utf8) {
  icu::UnicodeString text =
      icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  std::vector<std::string> tokens;
  const int32_t len = text.length();
  int32_t i = 0;
  while (i < len) {
    while (i < len && u_isUWhiteSpace(text.char32At(i))) i = text.moveIndex32(i, 1);
    int32_t start = i;
    while (i < len && !u_isUWhiteSpace(text.char32At(i))) i = text.moveIndex32(i, 1);
    int32_t end = i;

    while (start < end && u_ispunct(text.char32At(start))) start = text.moveIndex32(start, 1);
    while (end > start) {
      int32_t prev = text.moveIndex32(end, -1);
      if (!u_ispunct(text.char32At(prev))) break;
      end = prev;
    }
    if (start < end) tokens.push_back(normalize(icu::UnicodeString(text, start, end - start)));
  }
  return tokens;
}

}  // namespace infocontent
