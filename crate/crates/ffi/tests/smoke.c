#include <stdio.h>
#include "brickrank.h"

int main(void) {
    BrProtoSet *set = br_protoset_new();
    BrAntichain *m = NULL;
    uint64_t rank = 0;

    if (br_protoset_add(set, "2x3") != BR_STATUS_OK || br_protoset_add(set, "3x2") != BR_STATUS_OK)
        return 1;
    if (br_minimal_set(set, &m) != BR_STATUS_OK)
        return 2;
    for (size_t i = 0; i < br_antichain_len(m); i++) {
        char *s = NULL;
        if (br_antichain_get(m, i, &s) != BR_STATUS_OK)
            return 3;
        printf(i ? " %s" : "%s", s);
        br_string_free(s);
    }
    printf("\ntilable %d\n", br_is_tilable(m, "6x7") == BR_STATUS_OK);
    if (br_maxrank(3, 3, false, &rank) != BR_STATUS_OK) {
        fprintf(stderr, "%s\n", br_last_error_message());
        return 4;
    }
    printf("maxrank %llu\n", (unsigned long long)rank);

    br_antichain_free(m);
    br_protoset_free(set);
    return 0;
}
