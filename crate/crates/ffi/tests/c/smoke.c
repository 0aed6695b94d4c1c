#include <stdio.h>
#include <string.h>
#include "axiomprobe.h"

int main(void) {
    AxpAxiom *axiom = NULL;
    char *printed = NULL;
    if (axp_axiom_parse("Rel(A,B,lawyer) -> More(Prop(A,know law),Prop(B,know law))", &axiom) != AXP_STATUS_OK) {
        fprintf(stderr, "parse failed: %s\n", axp_last_error());
        return 1;
    }
    if (axp_axiom_print(axiom, &printed) != AXP_STATUS_OK) {
        return 2;
    }
    printf("%s\n", printed);
    axp_string_free(printed);
    axp_axiom_free(axiom);

    AxpAxiom *bad = NULL;
    if (axp_axiom_parse("More(A)", &bad) != AXP_STATUS_PARSE || bad != NULL || axp_last_error() == NULL) {
        return 3;
    }
    return 0;
}
